#include "nslag/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace nslag {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// Recursive-descent parser emitting postfix code.
class ExprParser {
public:
    ExprParser(std::string_view src, Expr& out) : src_(src), out_(out) {}

    void run() {
        parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            fail("unexpected trailing input");
        if (out_.code_.empty())
            fail("empty expression");
    }

private:
    std::string_view src_;
    Expr& out_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ExprError("expression error at offset " + std::to_string(pos_) +
                        " in \"" + std::string(src_) + "\": " + what);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    void emit(Expr::Op op, double v = 0.0) { out_.code_.push_back({op, v}); }

    void parse_expr() {
        parse_term();
        for (;;) {
            if (accept('+')) { parse_term(); emit(Expr::Op::Add); }
            else if (accept('-')) { parse_term(); emit(Expr::Op::Sub); }
            else break;
        }
    }

    void parse_term() {
        parse_unary();
        for (;;) {
            if (accept('*')) { parse_unary(); emit(Expr::Op::Mul); }
            else if (accept('/')) { parse_unary(); emit(Expr::Op::Div); }
            else break;
        }
    }

    void parse_unary() {
        if (accept('-')) { parse_unary(); emit(Expr::Op::Neg); return; }
        if (accept('+')) { parse_unary(); return; }
        parse_power();
    }

    void parse_power() {
        parse_primary();
        // right associative: a^b^c = a^(b^c)
        if (accept('^')) {
            parse_unary();
            emit(Expr::Op::Pow);
        }
    }

    void parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            parse_expr();
            expect(')');
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            emit(Expr::Op::PushConst, v);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string_view name = src_.substr(start, pos_ - start);
            if (name == "pi") { emit(Expr::Op::PushConst, kPi); return; }
            if (name == "x") { emit(Expr::Op::PushX); return; }
            if (name == "M") { emit(Expr::Op::PushM); return; }
            if (name == "theta") { emit(Expr::Op::PushTheta); return; }
            Expr::Op fn;
            if (name == "sin") fn = Expr::Op::Sin;
            else if (name == "cos") fn = Expr::Op::Cos;
            else if (name == "exp") fn = Expr::Op::Exp;
            else if (name == "log") fn = Expr::Op::Log;
            else fail("unknown identifier '" + std::string(name) + "'");
            expect('(');
            parse_expr();
            expect(')');
            emit(fn);
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

Expr Expr::parse(std::string_view src) {
    Expr e;
    e.src_ = std::string(src);
    ExprParser(src, e).run();
    // eval() uses a fixed stack; reject pathological nesting up front.
    int depth = 0, max_depth = 0;
    for (const Instr& in : e.code_) {
        switch (in.op) {
        case Op::PushConst: case Op::PushX: case Op::PushM: case Op::PushTheta:
            max_depth = std::max(max_depth, ++depth);
            break;
        case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
            --depth;
            break;
        default:
            break;
        }
    }
    if (max_depth > 63)
        throw ExprError("expression too deeply nested: \"" + std::string(src) + "\"");
    return e;
}

double Expr::eval(double x, double M, double theta) const {
    double stack[64];
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.op) {
        case Op::PushConst: stack[++top] = in.value; break;
        case Op::PushX: stack[++top] = x; break;
        case Op::PushM: stack[++top] = M; break;
        case Op::PushTheta: stack[++top] = theta; break;
        case Op::Add: --top; stack[top] += stack[top + 1]; break;
        case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
        case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
        case Op::Div: --top; stack[top] /= stack[top + 1]; break;
        case Op::Pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::Sin: stack[top] = std::sin(stack[top]); break;
        case Op::Cos: stack[top] = std::cos(stack[top]); break;
        case Op::Exp: stack[top] = std::exp(stack[top]); break;
        case Op::Log: stack[top] = std::log(stack[top]); break;
        }
    }
    return stack[0];
}

} // namespace nslag
