#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clc {

using Cpx = std::complex<double>;

// Errors carry a short stage tag so pipeline failures can be attributed.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Expression tree for an entire function of one complex variable.
// Grammar (see parse_function): constants, z, + - *, ^ by a non-negative
// integer, sin, cos, exp, sqrt(<constant>), i, pi. No division, no log,
// so every representable function is entire and has an entire derivative.
struct Expr {
    enum class Kind { Const, Var, Add, Sub, Mul, Neg, Pow, Sin, Cos, Exp };
    Kind kind;
    Cpx value{};                    // Const
    int exponent = 0;               // Pow
    std::shared_ptr<const Expr> a;  // left / unary operand
    std::shared_ptr<const Expr> b;  // right operand
};

using ExprPtr = std::shared_ptr<const Expr>;

class AnalyticFunction {
public:
    AnalyticFunction() = default;
    explicit AnalyticFunction(ExprPtr root) : root_(std::move(root)) {}

    bool empty() const { return root_ == nullptr; }

    Cpx eval(Cpx z) const;

    // Symbolic derivative; pure, so safe to call from any thread.
    AnalyticFunction derivative() const;

    // Coefficient list c0..cn when the expression is a pure polynomial.
    std::optional<std::vector<Cpx>> polynomial_coeffs() const;

    std::string to_string() const;

    const ExprPtr& root() const { return root_; }

    // Builders used by tests and the realizer.
    static AnalyticFunction constant(Cpx c);
    static AnalyticFunction var();
    static AnalyticFunction from_coeffs(const std::vector<Cpx>& coeffs);

    friend AnalyticFunction operator+(const AnalyticFunction&, const AnalyticFunction&);
    friend AnalyticFunction operator-(const AnalyticFunction&, const AnalyticFunction&);
    friend AnalyticFunction operator*(const AnalyticFunction&, const AnalyticFunction&);

private:
    ExprPtr root_;
};

// Parses the plain-text grammar, e.g. "z^2 - 1", "sin(z)", "(z-1)*(z+2)^2",
// "z^2 - sqrt(3.4)*z". Division is rejected. Errors carry line/column.
AnalyticFunction parse_function(const std::string& text);

inline bool is_finite(Cpx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace clc
