#include "nicert/rational.hpp"

#include <cmath>

#include "nicert/errors.hpp"
#include "nicert/tolerances.hpp"

namespace nicert {

RationalFunction::RationalFunction() : num_(Polynomial::zero()), den_(Polynomial::one()) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    reduce();
}

RationalFunction RationalFunction::constant(double k) {
    return RationalFunction(Polynomial({k}), Polynomial::one());
}

void RationalFunction::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial::one();
        return;
    }
    // Shared s^k factors first: they matter for limits at the origin and the
    // double-precision Euclid handles them less reliably than a shift does.
    double ns = num_.inf_norm();
    double ds = den_.inf_norm();
    while (num_.degree() >= 1 && den_.degree() >= 1 &&
           std::abs(num_.coeff(0)) <= 1e-12 * ns && std::abs(den_.coeff(0)) <= 1e-12 * ds) {
        std::vector<double> nc(num_.coeffs().begin() + 1, num_.coeffs().end());
        std::vector<double> dc(den_.coeffs().begin() + 1, den_.coeffs().end());
        num_ = Polynomial(std::move(nc));
        den_ = Polynomial(std::move(dc));
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
        Polynomial q, r;
        Polynomial::divmod(num_, g, q, r);
        num_ = q;
        Polynomial::divmod(den_, g, q, r);
        den_ = q;
    }
    double lead = den_.leading();
    den_ = den_.monic();
    num_ = (1.0 / lead) * num_;
}

std::complex<double> RationalFunction::operator()(std::complex<double> s) const {
    std::complex<double> d = den_(s);
    double scale = 0.0;
    for (double c : den_.coeffs()) scale += c * c;
    scale = std::sqrt(scale);
    if (std::abs(d) <= tol::eval_pole * scale) {
        throw EvalAtPole("denominator vanishes at evaluation point");
    }
    return num_(s) / d;
}

double RationalFunction::at_zero() const {
    return (*this)(std::complex<double>(0.0, 0.0)).real();
}

double RationalFunction::at_infinity() const {
    if (num_.degree() > den_.degree()) throw Error("at_infinity on an improper function");
    if (num_.degree() < den_.degree()) return 0.0;
    return num_.leading() / den_.leading();
}

int RationalFunction::origin_pole_order() const {
    if (num_.is_zero()) return 0;
    int order = 0;
    double scale = den_.inf_norm();
    while (order <= den_.degree() && std::abs(den_.coeff(order)) <= 1e-10 * scale) ++order;
    return order;
}

RationalFunction RationalFunction::derivative() const {
    // (n'd - nd') / d^2
    Polynomial n = num_.derivative() * den_ - num_ * den_.derivative();
    return RationalFunction(std::move(n), den_ * den_);
}

RationalFunction RationalFunction::negated_argument() const {
    return RationalFunction(num_.negated_argument(), den_.negated_argument());
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator*(double k, const RationalFunction& r) {
    return RationalFunction(k * r.num_, r.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw Error("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

}  // namespace nicert
