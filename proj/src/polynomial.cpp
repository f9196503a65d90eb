#include "nicert/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nicert/errors.hpp"

namespace nicert {

namespace {
constexpr double kTrimRel = 1e-12;
}

Polynomial::Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) { trim(); }

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) { trim(); }

void Polynomial::trim() {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw Error("polynomial coefficient not finite");
    }
    double scale = inf_norm();
    double cut = kTrimRel * scale;
    while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut) {
        coeffs_.pop_back();
    }
}

double Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<size_t>(k)];
}

double Polynomial::leading() const {
    return coeffs_.empty() ? 0.0 : coeffs_.back();
}

double Polynomial::inf_norm() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return zero();
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::negated_argument() const {
    std::vector<double> c = coeffs_;
    for (size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::times_power(int k) const {
    if (is_zero()) return zero();
    if (k == 0) return *this;
    std::vector<double> c(coeffs_.size() + static_cast<size_t>(k), 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + k);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return zero();
    return (1.0 / leading()) * (*this);
}

Polynomial Polynomial::operator-() const {
    std::vector<double> c = coeffs_;
    for (double& x : c) x = -x;
    return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial::zero();
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (size_t j = 0; j < b.coeffs_.size(); ++j) {
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return Polynomial(std::move(c));
}

Polynomial operator*(double k, const Polynomial& p) {
    std::vector<double> c = p.coeffs_;
    for (double& x : c) x *= k;
    return Polynomial(std::move(c));
}

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    std::vector<double> rem = a.coeffs_;
    int db = b.degree();
    double blead = b.leading();
    std::vector<double> quot;
    if (a.degree() >= db) quot.assign(static_cast<size_t>(a.degree() - db) + 1, 0.0);
    double scale = std::max({a.inf_norm(), b.inf_norm(), 1.0});
    int dr = a.degree();
    while (dr >= db) {
        double t = rem[static_cast<size_t>(dr)] / blead;
        quot[static_cast<size_t>(dr - db)] = t;
        for (int k = 0; k <= db; ++k) {
            rem[static_cast<size_t>(dr - db + k)] -= t * b.coeffs_[static_cast<size_t>(k)];
        }
        rem[static_cast<size_t>(dr)] = 0.0;
        scale = std::max(scale, std::abs(t) * b.inf_norm());
        --dr;
        while (dr >= 0 && std::abs(rem[static_cast<size_t>(dr)]) <= kTrimRel * scale) {
            rem[static_cast<size_t>(dr)] = 0.0;
            --dr;
        }
    }
    q = Polynomial(std::move(quot));
    rem.resize(static_cast<size_t>(std::max(dr + 1, 0)));
    r = Polynomial(std::move(rem));
}

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    Polynomial x = a.monic();
    Polynomial y = b.monic();
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero() && y.degree() > 0) {
        Polynomial q, r;
        divmod(x, y, q, r);
        // Drop remainder noise relative to the working scale.
        if (!r.is_zero() && r.inf_norm() <= 1e-10 * std::max(x.inf_norm(), 1.0)) r = zero();
        x = y;
        y = r.monic();
    }
    Polynomial g = y.is_zero() ? x : one();
    if (g.degree() <= 0) return one();
    // Verify the candidate actually divides both inputs.
    Polynomial q, r;
    divmod(a, g, q, r);
    if (r.inf_norm() > 1e-6 * std::max(a.inf_norm(), 1.0)) return one();
    divmod(b, g, q, r);
    if (r.inf_norm() > 1e-6 * std::max(b.inf_norm(), 1.0)) return one();
    return g;
}

std::vector<std::complex<double>> Polynomial::roots() const {
    int n = degree();
    if (n <= 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        companion(0, i) = -coeffs_[static_cast<size_t>(n - 1 - i)] / coeffs_[static_cast<size_t>(n)];
    }
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](const std::complex<double>& p, const std::complex<double>& q) {
        if (p.real() != q.real()) return p.real() < q.real();
        return p.imag() < q.imag();
    });
    return out;
}

}  // namespace nicert
