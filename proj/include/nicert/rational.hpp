#pragma once

#include <complex>

#include "nicert/polynomial.hpp"

namespace nicert {

/// Real-rational function num/den.  Invariants after construction:
/// den is monic and nonzero, and num/den carry no common factor that the
/// verified gcd can find.
class RationalFunction {
   public:
    RationalFunction();  // 0/1
    RationalFunction(Polynomial num, Polynomial den);

    static RationalFunction constant(double k);
    static RationalFunction zero() { return RationalFunction(); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_proper() const { return num_.degree() <= den_.degree(); }
    bool is_strictly_proper() const { return num_.degree() < den_.degree(); }

    /// Throws EvalAtPole when the denominator vanishes at s.
    std::complex<double> operator()(std::complex<double> s) const;

    /// Value of the reduced function at s = 0; throws EvalAtPole on an
    /// origin pole.
    double at_zero() const;

    /// Limit as s -> infinity for proper functions (leading-coefficient
    /// ratio when degrees match, 0 when strictly proper).
    double at_infinity() const;

    /// Multiplicity of s = 0 as a pole of the reduced function.
    int origin_pole_order() const;

    RationalFunction derivative() const;
    RationalFunction negated_argument() const;  // r(-s)

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(double k, const RationalFunction& r);
    friend RationalFunction operator*(const RationalFunction& r, double k) { return k * r; }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

   private:
    void reduce();
    Polynomial num_, den_;
};

}  // namespace nicert
