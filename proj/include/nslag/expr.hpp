#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nslag {

struct ExprError : std::runtime_error {
    explicit ExprError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A compiled arithmetic expression over the config grammar:
/// operators + - * / ^, functions sin cos exp log, constant pi,
/// and the bound names x, M, theta. Parsing is strict: unknown
/// identifiers and trailing input are errors.
class Expr {
public:
    Expr() = default;

    static Expr parse(std::string_view src);

    /// Evaluate with x bound; M and theta default to 0 unless given.
    double eval(double x, double M = 0.0, double theta = 0.0) const;

    bool empty() const { return code_.empty(); }
    const std::string& source() const { return src_; }

private:
    enum class Op : unsigned char {
        PushConst, PushX, PushM, PushTheta,
        Add, Sub, Mul, Div, Pow, Neg,
        Sin, Cos, Exp, Log,
    };
    struct Instr {
        Op op;
        double value = 0.0;
    };
    std::vector<Instr> code_;
    std::string src_;

    friend class ExprParser;
};

} // namespace nslag
