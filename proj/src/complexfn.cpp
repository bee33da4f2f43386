#include "clc/complexfn.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace clc {

namespace {

ExprPtr mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr mk_const(Cpx c) {
    Expr e;
    e.kind = Expr::Kind::Const;
    e.value = c;
    return mk(std::move(e));
}

ExprPtr mk_unary(Expr::Kind k, ExprPtr a) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    return mk(std::move(e));
}

ExprPtr mk_bin(Expr::Kind k, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return mk(std::move(e));
}

ExprPtr mk_pow(ExprPtr a, int n) {
    Expr e;
    e.kind = Expr::Kind::Pow;
    e.a = std::move(a);
    e.exponent = n;
    return mk(std::move(e));
}

bool is_const(const ExprPtr& e, Cpx v) {
    return e->kind == Expr::Kind::Const && e->value == v;
}

// Light simplification keeps derivative trees small.
ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return mk_const(a->value + b->value);
    return mk_bin(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return mk_const(a->value - b->value);
    return mk_bin(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return mk_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == Expr::Kind::Const && b->kind == Expr::Kind::Const)
        return mk_const(a->value * b->value);
    return mk_bin(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr neg(ExprPtr a) {
    if (a->kind == Expr::Kind::Const) return mk_const(-a->value);
    return mk_unary(Expr::Kind::Neg, std::move(a));
}

Cpx eval_node(const Expr* e, Cpx z) {
    switch (e->kind) {
        case Expr::Kind::Const: return e->value;
        case Expr::Kind::Var: return z;
        case Expr::Kind::Add: return eval_node(e->a.get(), z) + eval_node(e->b.get(), z);
        case Expr::Kind::Sub: return eval_node(e->a.get(), z) - eval_node(e->b.get(), z);
        case Expr::Kind::Mul: return eval_node(e->a.get(), z) * eval_node(e->b.get(), z);
        case Expr::Kind::Neg: return -eval_node(e->a.get(), z);
        case Expr::Kind::Pow: {
            Cpx base = eval_node(e->a.get(), z);
            Cpx r = 1.0;
            int n = e->exponent;
            // binary exponentiation; n >= 0 by construction
            while (n > 0) {
                if (n & 1) r *= base;
                base *= base;
                n >>= 1;
            }
            return r;
        }
        case Expr::Kind::Sin: return std::sin(eval_node(e->a.get(), z));
        case Expr::Kind::Cos: return std::cos(eval_node(e->a.get(), z));
        case Expr::Kind::Exp: return std::exp(eval_node(e->a.get(), z));
    }
    return {};
}

ExprPtr diff(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const: return mk_const(0.0);
        case Expr::Kind::Var: return mk_const(1.0);
        case Expr::Kind::Add: return add(diff(e->a), diff(e->b));
        case Expr::Kind::Sub: return sub(diff(e->a), diff(e->b));
        case Expr::Kind::Mul: return add(mul(diff(e->a), e->b), mul(e->a, diff(e->b)));
        case Expr::Kind::Neg: return neg(diff(e->a));
        case Expr::Kind::Pow: {
            if (e->exponent == 0) return mk_const(0.0);
            ExprPtr inner = diff(e->a);
            ExprPtr p = e->exponent == 1 ? mk_const(1.0) : mk_pow(e->a, e->exponent - 1);
            return mul(mul(mk_const(Cpx(e->exponent, 0)), p), inner);
        }
        case Expr::Kind::Sin: return mul(mk_unary(Expr::Kind::Cos, e->a), diff(e->a));
        case Expr::Kind::Cos: return neg(mul(mk_unary(Expr::Kind::Sin, e->a), diff(e->a)));
        case Expr::Kind::Exp: return mul(mk_unary(Expr::Kind::Exp, e->a), diff(e->a));
    }
    return {};
}

constexpr int kMaxPolyDegree = 64;

std::optional<std::vector<Cpx>> poly_of(const ExprPtr& e) {
    using V = std::vector<Cpx>;
    auto trim = [](V v) {
        while (v.size() > 1 && std::abs(v.back()) == 0.0) v.pop_back();
        return v;
    };
    switch (e->kind) {
        case Expr::Kind::Const: return V{e->value};
        case Expr::Kind::Var: return V{Cpx(0), Cpx(1)};
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            auto pa = poly_of(e->a), pb = poly_of(e->b);
            if (!pa || !pb) return std::nullopt;
            V r(std::max(pa->size(), pb->size()), Cpx(0));
            for (size_t i = 0; i < pa->size(); ++i) r[i] += (*pa)[i];
            double s = e->kind == Expr::Kind::Sub ? -1.0 : 1.0;
            for (size_t i = 0; i < pb->size(); ++i) r[i] += s * (*pb)[i];
            return trim(std::move(r));
        }
        case Expr::Kind::Mul: {
            auto pa = poly_of(e->a), pb = poly_of(e->b);
            if (!pa || !pb) return std::nullopt;
            if (pa->size() + pb->size() > kMaxPolyDegree + 2) return std::nullopt;
            V r(pa->size() + pb->size() - 1, Cpx(0));
            for (size_t i = 0; i < pa->size(); ++i)
                for (size_t j = 0; j < pb->size(); ++j) r[i + j] += (*pa)[i] * (*pb)[j];
            return trim(std::move(r));
        }
        case Expr::Kind::Neg: {
            auto pa = poly_of(e->a);
            if (!pa) return std::nullopt;
            for (auto& c : *pa) c = -c;
            return pa;
        }
        case Expr::Kind::Pow: {
            auto pa = poly_of(e->a);
            if (!pa) return std::nullopt;
            if ((pa->size() - 1) * size_t(e->exponent) > kMaxPolyDegree) return std::nullopt;
            V r{Cpx(1)};
            for (int k = 0; k < e->exponent; ++k) {
                V nxt(r.size() + pa->size() - 1, Cpx(0));
                for (size_t i = 0; i < r.size(); ++i)
                    for (size_t j = 0; j < pa->size(); ++j) nxt[i + j] += r[i] * (*pa)[j];
                r = std::move(nxt);
            }
            return trim(std::move(r));
        }
        default: return std::nullopt;  // sin/cos/exp
    }
}

int precedence_wrap(const Expr* e) {
    switch (e->kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul: return 2;
        case Expr::Kind::Neg: return 2;
        default: return 3;
    }
}

void print_node(const Expr* e, std::ostringstream& out, int parent_prec) {
    int prec = precedence_wrap(e);
    bool wrap = prec < parent_prec;
    if (wrap) out << '(';
    switch (e->kind) {
        case Expr::Kind::Const: {
            Cpx v = e->value;
            if (v.imag() == 0.0) {
                out << v.real();
            } else if (v.real() == 0.0) {
                out << v.imag() << "*i";
            } else {
                out << '(' << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "*i)";
            }
            break;
        }
        case Expr::Kind::Var: out << 'z'; break;
        case Expr::Kind::Add:
            print_node(e->a.get(), out, 1);
            out << " + ";
            print_node(e->b.get(), out, 1);
            break;
        case Expr::Kind::Sub:
            print_node(e->a.get(), out, 1);
            out << " - ";
            print_node(e->b.get(), out, 2);
            break;
        case Expr::Kind::Mul:
            print_node(e->a.get(), out, 2);
            out << "*";
            print_node(e->b.get(), out, 2);
            break;
        case Expr::Kind::Neg:
            out << '-';
            print_node(e->a.get(), out, 3);
            break;
        case Expr::Kind::Pow:
            print_node(e->a.get(), out, 4);
            out << '^' << e->exponent;
            break;
        case Expr::Kind::Sin:
            out << "sin(";
            print_node(e->a.get(), out, 0);
            out << ')';
            break;
        case Expr::Kind::Cos:
            out << "cos(";
            print_node(e->a.get(), out, 0);
            out << ')';
            break;
        case Expr::Kind::Exp:
            out << "exp(";
            print_node(e->a.get(), out, 0);
            out << ')';
            break;
    }
    if (wrap) out << ')';
}

// ---- parser ------------------------------------------------------------

struct Parser {
    const std::string& s;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) {
        std::ostringstream os;
        os << msg << " at line " << line << ", column " << col;
        throw Error("parse", os.str());
    }

    void advance() {
        if (pos < s.size()) {
            if (s[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            advance();
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    double number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
            advance();
        if (pos == start) fail("expected a number");
        return std::stod(s.substr(start, pos - start));
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) advance();
        return s.substr(start, pos - start);
    }

    ExprPtr expr() {
        ExprPtr r = term();
        while (true) {
            if (eat('+')) {
                r = add(r, term());
            } else if (eat('-')) {
                r = sub(r, term());
            } else {
                return r;
            }
        }
    }

    ExprPtr term() {
        ExprPtr r = factor();
        while (true) {
            if (eat('*')) {
                r = mul(r, factor());
            } else if (peek() == '/') {
                fail("division is not allowed (functions must be entire)");
            } else {
                return r;
            }
        }
    }

    ExprPtr factor() {
        if (eat('-')) return neg(factor());
        ExprPtr base = primary();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("exponent must be a non-negative integer");
            double n = number();
            if (n != std::floor(n) || n < 0 || n > kMaxPolyDegree)
                fail("exponent must be a non-negative integer");
            return mk_pow(base, static_cast<int>(n));
        }
        return base;
    }

    ExprPtr primary() {
        char c = peek();
        if (c == '(') {
            eat('(');
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return mk_const(number());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            int start_line = line, start_col = col;
            std::string name = ident();
            if (name == "z") return mk([] { Expr e; e.kind = Expr::Kind::Var; return e; }());
            if (name == "i") return mk_const(Cpx(0, 1));
            if (name == "pi") return mk_const(Cpx(3.14159265358979323846, 0));
            if (name == "sin" || name == "cos" || name == "exp") {
                if (!eat('(')) fail("expected '(' after " + name);
                ExprPtr arg = expr();
                if (!eat(')')) fail("expected ')'");
                Expr::Kind k = name == "sin"   ? Expr::Kind::Sin
                               : name == "cos" ? Expr::Kind::Cos
                                               : Expr::Kind::Exp;
                return mk_unary(k, arg);
            }
            if (name == "sqrt") {
                if (!eat('(')) fail("expected '(' after sqrt");
                bool negated = eat('-');
                double v = number();
                if (!eat(')')) fail("expected ')'");
                if (negated) fail("sqrt of a negative constant is not supported");
                return mk_const(Cpx(std::sqrt(v), 0));
            }
            line = start_line;
            col = start_col;
            fail("unknown identifier '" + name + "'");
        }
        if (c == '/') fail("division is not allowed (functions must be entire)");
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Cpx AnalyticFunction::eval(Cpx z) const {
    Cpx v = eval_node(root_.get(), z);
    if (!is_finite(v)) throw Error("eval", "non-finite value");
    return v;
}

AnalyticFunction AnalyticFunction::derivative() const { return AnalyticFunction(diff(root_)); }

std::optional<std::vector<Cpx>> AnalyticFunction::polynomial_coeffs() const {
    return poly_of(root_);
}

std::string AnalyticFunction::to_string() const {
    std::ostringstream os;
    os.precision(17);
    print_node(root_.get(), os, 0);
    return os.str();
}

AnalyticFunction AnalyticFunction::constant(Cpx c) { return AnalyticFunction(mk_const(c)); }

AnalyticFunction AnalyticFunction::var() {
    Expr e;
    e.kind = Expr::Kind::Var;
    return AnalyticFunction(mk(std::move(e)));
}

AnalyticFunction AnalyticFunction::from_coeffs(const std::vector<Cpx>& coeffs) {
    ExprPtr r = mk_const(coeffs.empty() ? Cpx(0) : coeffs.back());
    ExprPtr z = var().root();
    for (size_t i = coeffs.size(); i-- > 1;) r = add(mul(r, z), mk_const(coeffs[i - 1]));
    return AnalyticFunction(r);
}

AnalyticFunction operator+(const AnalyticFunction& a, const AnalyticFunction& b) {
    return AnalyticFunction(add(a.root_, b.root_));
}
AnalyticFunction operator-(const AnalyticFunction& a, const AnalyticFunction& b) {
    return AnalyticFunction(sub(a.root_, b.root_));
}
AnalyticFunction operator*(const AnalyticFunction& a, const AnalyticFunction& b) {
    return AnalyticFunction(mul(a.root_, b.root_));
}

AnalyticFunction parse_function(const std::string& text) {
    Parser p(text);
    ExprPtr e = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return AnalyticFunction(e);
}

}  // namespace clc
