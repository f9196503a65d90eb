#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace nicert {

/// Real polynomial in s with coefficients stored in ascending powers.
/// The zero polynomial has an empty coefficient vector and degree -1.
class Polynomial {
   public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> ascending);
    explicit Polynomial(std::vector<double> ascending);

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return Polynomial({1.0}); }
    static Polynomial variable() { return Polynomial({0.0, 1.0}); }  // s

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    double coeff(int k) const;
    const std::vector<double>& coeffs() const { return coeffs_; }
    double leading() const;
    double inf_norm() const;  // max |coefficient|, 0 for the zero polynomial

    std::complex<double> operator()(std::complex<double> s) const;
    double operator()(double s) const;

    Polynomial derivative() const;
    Polynomial negated_argument() const;  // p(-s)
    Polynomial times_power(int k) const;  // p(s) * s^k
    Polynomial monic() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double k, const Polynomial& p);
    friend Polynomial operator*(const Polynomial& p, double k) { return k * p; }
    bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

    /// Euclidean division a = q*b + r with deg r < deg b.
    static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r);

    /// Monic gcd via the Euclidean algorithm.  The candidate is verified by
    /// back-division; on verification failure the constant 1 is returned so
    /// that reduction never over-cancels.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    /// Roots via the companion matrix.
    std::vector<std::complex<double>> roots() const;

   private:
    void trim();
    std::vector<double> coeffs_;
};

}  // namespace nicert
