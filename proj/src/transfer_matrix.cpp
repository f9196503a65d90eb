#include "nicert/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "nicert/errors.hpp"
#include "nicert/tolerances.hpp"

namespace nicert {

TransferMatrix::TransferMatrix(int n) : n_(n), entries_(static_cast<size_t>(n) * n) {
    if (n <= 0) throw Error("transfer matrix dimension must be positive");
}

TransferMatrix TransferMatrix::identity(int n) {
    TransferMatrix G(n);
    for (int i = 0; i < n; ++i) G.at(i, i) = RationalFunction::constant(1.0);
    return G;
}

TransferMatrix TransferMatrix::constant(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw Error("constant transfer matrix must be square");
    TransferMatrix G(static_cast<int>(M.rows()));
    for (int i = 0; i < G.n_; ++i)
        for (int j = 0; j < G.n_; ++j) G.at(i, j) = RationalFunction::constant(M(i, j));
    return G;
}

TransferMatrix TransferMatrix::scalar(RationalFunction r) {
    TransferMatrix G(1);
    G.at(0, 0) = std::move(r);
    return G;
}

TransferMatrix TransferMatrix::dyad(const Eigen::VectorXd& a, const RationalFunction& g) {
    TransferMatrix G(static_cast<int>(a.size()));
    for (int i = 0; i < G.n_; ++i)
        for (int j = 0; j < G.n_; ++j) G.at(i, j) = (a(i) * a(j)) * g;
    return G;
}

RationalFunction& TransferMatrix::at(int i, int j) {
    return entries_[static_cast<size_t>(i) * n_ + j];
}

const RationalFunction& TransferMatrix::at(int i, int j) const {
    return entries_[static_cast<size_t>(i) * n_ + j];
}

bool TransferMatrix::is_proper() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const RationalFunction& r) { return r.is_proper(); });
}

bool TransferMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const RationalFunction& r) { return r.is_zero(); });
}

Eigen::MatrixXcd TransferMatrix::eval(std::complex<double> s) const {
    Eigen::MatrixXcd M(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) M(i, j) = at(i, j)(s);
    return M;
}

TransferMatrix TransferMatrix::transpose() const {
    TransferMatrix G(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) G.at(i, j) = at(j, i);
    return G;
}

TransferMatrix TransferMatrix::operator-() const {
    TransferMatrix G(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) G.at(i, j) = -at(i, j);
    return G;
}

TransferMatrix operator+(const TransferMatrix& a, const TransferMatrix& b) {
    if (a.n_ != b.n_) throw Error("dimension mismatch");
    TransferMatrix G(a.n_);
    for (int i = 0; i < a.n_; ++i)
        for (int j = 0; j < a.n_; ++j) G.at(i, j) = a.at(i, j) + b.at(i, j);
    return G;
}

TransferMatrix operator-(const TransferMatrix& a, const TransferMatrix& b) {
    if (a.n_ != b.n_) throw Error("dimension mismatch");
    TransferMatrix G(a.n_);
    for (int i = 0; i < a.n_; ++i)
        for (int j = 0; j < a.n_; ++j) G.at(i, j) = a.at(i, j) - b.at(i, j);
    return G;
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    if (a.n_ != b.n_) throw Error("dimension mismatch");
    TransferMatrix G(a.n_);
    for (int i = 0; i < a.n_; ++i) {
        for (int j = 0; j < a.n_; ++j) {
            RationalFunction acc;
            for (int k = 0; k < a.n_; ++k) acc = acc + a.at(i, k) * b.at(k, j);
            G.at(i, j) = acc;
        }
    }
    return G;
}

TransferMatrix operator*(double k, const TransferMatrix& g) {
    TransferMatrix G(g.n_);
    for (int i = 0; i < g.n_; ++i)
        for (int j = 0; j < g.n_; ++j) G.at(i, j) = k * g.at(i, j);
    return G;
}

TransferMatrix operator*(const TransferMatrix& g, const Eigen::MatrixXd& M) {
    return g * TransferMatrix::constant(M);
}

TransferMatrix operator*(const Eigen::MatrixXd& M, const TransferMatrix& g) {
    return TransferMatrix::constant(M) * g;
}

RationalFunction TransferMatrix::determinant() const {
    if (n_ == 1) return at(0, 0);
    RationalFunction det;
    for (int j = 0; j < n_; ++j) {
        // Minor along the first row.
        TransferMatrix sub(n_ - 1);
        for (int r = 1; r < n_; ++r) {
            int cc = 0;
            for (int c = 0; c < n_; ++c) {
                if (c == j) continue;
                sub.at(r - 1, cc++) = at(r, c);
            }
        }
        RationalFunction term = at(0, j) * sub.determinant();
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

TransferMatrix TransferMatrix::inverse() const {
    RationalFunction det = determinant();
    if (det.is_zero()) throw Error("rational matrix is singular as a function");
    TransferMatrix inv(n_);
    if (n_ == 1) {
        inv.at(0, 0) = RationalFunction::constant(1.0) / det;
        return inv;
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            TransferMatrix sub(n_ - 1);
            int rr = 0;
            for (int r = 0; r < n_; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n_; ++c) {
                    if (c == j) continue;
                    sub.at(rr, cc++) = at(r, c);
                }
                ++rr;
            }
            RationalFunction cof = sub.determinant();
            if ((i + j) % 2 != 0) cof = -cof;
            inv.at(j, i) = cof / det;  // adjugate transposes indices
        }
    }
    return inv;
}

Eigen::MatrixXcd eval_at(const TransferMatrix& G, std::complex<double> s) { return G.eval(s); }

bool is_axis_pole(const std::complex<double>& p) {
    return std::abs(p.real()) < tol::axis_pole * (1.0 + std::abs(p));
}

bool is_rhp_pole(const std::complex<double>& p) {
    return p.real() > tol::axis_pole * (1.0 + std::abs(p));
}

bool has_axis_pole(const std::vector<PoleData>& pls) {
    return std::any_of(pls.begin(), pls.end(),
                       [](const PoleData& p) { return is_axis_pole(p.location); });
}

bool has_rhp_pole(const std::vector<PoleData>& pls) {
    return std::any_of(pls.begin(), pls.end(),
                       [](const PoleData& p) { return is_rhp_pole(p.location); });
}

bool has_origin_pole(const std::vector<PoleData>& pls) {
    return std::any_of(pls.begin(), pls.end(), [](const PoleData& p) {
        return std::abs(p.location) < tol::axis_pole * 10.0;
    });
}

std::vector<PoleData> poles(const TransferMatrix& G) {
    if (!G.is_proper()) throw Error("poles() requires a proper transfer matrix");
    const int n = G.dim();

    struct Root {
        std::complex<double> loc;
        int entry;  // flat index, to count per-entry multiplicity
    };
    std::vector<Root> all;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const RationalFunction& r = G.at(i, j);
            if (r.is_zero()) continue;
            for (const auto& rt : r.den().roots()) all.push_back({rt, i * n + j});
        }
    }
    if (all.empty()) return {};

    // Cluster root locations across entries.
    std::vector<PoleData> out;
    std::vector<bool> used(all.size(), false);
    for (size_t a = 0; a < all.size(); ++a) {
        if (used[a]) continue;
        std::vector<size_t> cluster{a};
        used[a] = true;
        for (size_t b = a + 1; b < all.size(); ++b) {
            if (used[b]) continue;
            double sc = 1.0 + std::max(std::abs(all[a].loc), std::abs(all[b].loc));
            if (std::abs(all[a].loc - all[b].loc) <= 1e-6 * sc) {
                cluster.push_back(b);
                used[b] = true;
            }
        }
        std::complex<double> loc(0.0, 0.0);
        for (size_t idx : cluster) loc += all[idx].loc;
        loc /= static_cast<double>(cluster.size());
        if (std::abs(loc.imag()) < tol::axis_pole * (1.0 + std::abs(loc))) loc = {loc.real(), 0.0};
        if (is_axis_pole(loc)) loc = {0.0, loc.imag()};

        // Pole order: largest per-entry multiplicity inside the cluster.
        int order = 0;
        std::vector<int> per_entry(static_cast<size_t>(n) * n, 0);
        for (size_t idx : cluster) per_entry[static_cast<size_t>(all[idx].entry)]++;
        for (int m : per_entry) order = std::max(order, m);

        PoleData pd;
        pd.location = loc;
        pd.multiplicity = order;
        if (order == 1 && is_axis_pole(loc)) {
            // Residue of a simple pole from den'(p).
            Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const RationalFunction& r = G.at(i, j);
                    if (r.is_zero()) continue;
                    if (per_entry[static_cast<size_t>(i * n + j)] == 1) {
                        R(i, j) = r.num()(loc) / r.den().derivative()(loc);
                    }
                }
            }
            pd.residue = R;
        }
        out.push_back(std::move(pd));
    }
    std::sort(out.begin(), out.end(), [](const PoleData& p, const PoleData& q) {
        if (std::abs(p.location.imag() - q.location.imag()) > 1e-12)
            return p.location.imag() < q.location.imag();
        return p.location.real() < q.location.real();
    });
    return out;
}

GainData gains(const TransferMatrix& G) {
    if (!G.is_proper()) throw Error("gains() requires a proper transfer matrix");
    const int n = G.dim();
    GainData out;
    out.instantaneous_gain = Eigen::MatrixXd(n, n);
    bool origin = false;
    Eigen::MatrixXd g0(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const RationalFunction& r = G.at(i, j);
            out.instantaneous_gain(i, j) = r.at_infinity();
            if (r.origin_pole_order() > 0) {
                origin = true;
            } else if (!origin) {
                g0(i, j) = r.at_zero();
            }
        }
    }
    if (!origin) out.static_gain = g0;
    return out;
}

Eigen::MatrixXd scaled_origin_limit(const TransferMatrix& G, int k) {
    if (k < 1) throw Error("scaled_origin_limit requires k >= 1");
    const int n = G.dim();
    Eigen::MatrixXd L(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const RationalFunction& r = G.at(i, j);
            if (r.is_zero()) {
                L(i, j) = 0.0;
                continue;
            }
            int order = r.origin_pole_order();
            if (order > k) throw LimitDiverges("origin pole order exceeds k");
            // s^k num / den, with the common s factors removed by reduction.
            RationalFunction shifted(r.num().times_power(k), r.den());
            L(i, j) = shifted.at_zero();
        }
    }
    return L;
}

}  // namespace nicert
