#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "nicert/rational.hpp"

namespace nicert {

/// Square proper real-rational transfer matrix.
class TransferMatrix {
   public:
    explicit TransferMatrix(int n);  // zero matrix
    static TransferMatrix identity(int n);
    static TransferMatrix constant(const Eigen::MatrixXd& M);
    static TransferMatrix scalar(RationalFunction r);  // 1x1
    /// a * g(s) * a^T for a real direction vector.
    static TransferMatrix dyad(const Eigen::VectorXd& a, const RationalFunction& g);

    int dim() const { return n_; }
    RationalFunction& at(int i, int j);
    const RationalFunction& at(int i, int j) const;

    bool is_proper() const;
    bool is_zero() const;

    /// Entrywise evaluation; throws EvalAtPole.
    Eigen::MatrixXcd eval(std::complex<double> s) const;

    TransferMatrix transpose() const;
    TransferMatrix operator-() const;
    friend TransferMatrix operator+(const TransferMatrix& a, const TransferMatrix& b);
    friend TransferMatrix operator-(const TransferMatrix& a, const TransferMatrix& b);
    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);
    friend TransferMatrix operator*(double k, const TransferMatrix& g);
    friend TransferMatrix operator*(const TransferMatrix& g, const Eigen::MatrixXd& M);
    friend TransferMatrix operator*(const Eigen::MatrixXd& M, const TransferMatrix& g);

    /// Inverse as a rational matrix via the adjugate.  Throws Error when the
    /// determinant is the zero function.
    TransferMatrix inverse() const;
    RationalFunction determinant() const;

   private:
    int n_;
    std::vector<RationalFunction> entries_;  // row-major
};

struct PoleData {
    std::complex<double> location;
    int multiplicity = 1;  // pole order: largest multiplicity over entries
    std::optional<Eigen::MatrixXcd> residue;  // lim (s - p) G(s), simple axis poles only
};

struct GainData {
    std::optional<Eigen::MatrixXd> static_gain;  // nullopt marks a pole at the origin
    Eigen::MatrixXd instantaneous_gain;
    bool pole_at_origin() const { return !static_gain.has_value(); }
};

/// Entrywise num(s)/den(s); throws EvalAtPole when any denominator vanishes.
Eigen::MatrixXcd eval_at(const TransferMatrix& G, std::complex<double> s);

/// Poles of G with orders; simple imaginary-axis poles carry residues.
std::vector<PoleData> poles(const TransferMatrix& G);

/// Static and instantaneous gains.
GainData gains(const TransferMatrix& G);

/// lim_{s->0} s^k G(s), computed by polynomial shift; throws LimitDiverges
/// when the origin pole order exceeds k.
Eigen::MatrixXd scaled_origin_limit(const TransferMatrix& G, int k);

/// True when some pole lies on the imaginary axis within tolerance.
bool has_axis_pole(const std::vector<PoleData>& pls);
/// True when some pole lies in the open right half plane within tolerance.
bool has_rhp_pole(const std::vector<PoleData>& pls);
/// True when some pole sits at the origin.
bool has_origin_pole(const std::vector<PoleData>& pls);

bool is_axis_pole(const std::complex<double>& p);
bool is_rhp_pole(const std::complex<double>& p);

}  // namespace nicert
