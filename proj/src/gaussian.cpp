#include "markovia/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "markovia/parallel.hpp"

namespace markovia {

namespace {

std::vector<int> mask_to_indices(Mask m) {
    std::vector<int> out;
    for (; m; m &= m - 1) out.push_back(lowest_bit(m));
    return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& s, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                s(rows[i], cols[j]);
    return out;
}

void check_indices(const Eigen::MatrixXd& sigma, const std::vector<int>& idx) {
    for (int i : idx)
        if (i < 0 || i >= sigma.rows()) throw DomainError("index outside covariance matrix");
}

}  // namespace

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& s, double cond_cap) {
    if (s.rows() != s.cols()) throw DomainError("matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed", 0.0);
    const auto& ev = es.eigenvalues();
    const double lo = ev(0), hi = ev(ev.size() - 1);
    if (!(lo > 0.0))
        throw NumericError("matrix is not positive definite (lambda_min = " +
                               format_double(lo) + ")",
                           lo);
    if (hi / lo > cond_cap)
        throw NumericError("condition number " + format_double(hi / lo) + " exceeds cap " +
                               format_double(cond_cap),
                           lo);
    return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

ConditionalResult gaussian_conditional(const Eigen::MatrixXd& sigma, const std::vector<int>& a,
                                       const std::vector<int>& b, double cond_cap) {
    if (sigma.rows() != sigma.cols()) throw DomainError("covariance matrix must be square");
    if (a.empty()) throw DomainError("target block must be nonempty");
    check_indices(sigma, a);
    check_indices(sigma, b);
    ConditionalResult out;
    Eigen::MatrixXd saa = submatrix(sigma, a, a);
    if (b.empty()) {
        out.coeffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.size()), 0);
        out.cov = saa;
        return out;
    }
    Eigen::MatrixXd sab = submatrix(sigma, a, b);
    Eigen::MatrixXd sbb_inv = spd_inverse(submatrix(sigma, b, b), cond_cap);
    out.coeffs = sab * sbb_inv;
    out.cov = saa - out.coeffs * sab.transpose();
    return out;
}

Eigen::MatrixXd precision_matrix(const Eigen::MatrixXd& sigma, double cond_cap) {
    return spd_inverse(sigma, cond_cap);
}

Eigen::MatrixXd partial_correlations(const Eigen::MatrixXd& precision) {
    const Eigen::Index n = precision.rows();
    if (precision.cols() != n) throw DomainError("precision matrix must be square");
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(precision(i, i) > 0.0))
            throw DomainError("precision diagonal must be positive");
        out(i, i) = 1.0;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j)
                out(i, j) = -precision(i, j) / std::sqrt(precision(i, i) * precision(j, j));
    return out;
}

double gaussian_ci_distance(const Eigen::MatrixXd& sigma, Mask a, Mask b, Mask c,
                            double cond_cap) {
    CIStatement st(a, b, c);  // validates disjoint nonempty blocks
    std::vector<int> av = mask_to_indices(st.a), bv = mask_to_indices(st.b),
                     cv = mask_to_indices(st.c);
    std::vector<int> ab = av;
    ab.insert(ab.end(), bv.begin(), bv.end());
    ConditionalResult cond = gaussian_conditional(sigma, ab, cv, cond_cap);
    double worst = 0.0;
    for (size_t i = 0; i < av.size(); ++i)
        for (size_t j = 0; j < bv.size(); ++j)
            worst = std::max(worst, std::abs(cond.cov(static_cast<Eigen::Index>(i),
                                                      static_cast<Eigen::Index>(av.size() + j))));
    return worst;
}

CIRelation relation_from_gaussian(const Eigen::MatrixXd& sigma, double tol) {
    if (sigma.rows() != sigma.cols()) throw DomainError("covariance matrix must be square");
    auto mat = std::make_shared<Eigen::MatrixXd>(sigma);
    return CIRelation(static_cast<int>(sigma.rows()), "gaussian-covariance", tol,
                      [mat](Mask a, Mask b, Mask c) {
                          return gaussian_ci_distance(*mat, a, b, c);
                      });
}

// ---------------------------------------------------------------------------
// Covariance models
// ---------------------------------------------------------------------------

Eigen::MatrixXd CovarianceModel::leading(int m) const {
    if (m < 1) throw DomainError("leading block size must be positive");
    Eigen::MatrixXd out(m, m);
    for (int i = 0; i < m; ++i) {
        out(i, i) = entry(i, i);
        for (int j = 0; j < i; ++j) {
            const double v = entry(i, j);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

ExplicitModel::ExplicitModel(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
    if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1)
        throw ConfigError("explicit covariance must be a nonempty square matrix");
    for (Eigen::Index i = 0; i < sigma_.rows(); ++i)
        for (Eigen::Index j = 0; j < sigma_.cols(); ++j) {
            if (!std::isfinite(sigma_(i, j)))
                throw ConfigError("covariance entries must be finite");
            if (std::abs(sigma_(i, j) - sigma_(j, i)) > 1e-12)
                throw ConfigError("covariance matrix must be symmetric");
        }
}

double ExplicitModel::entry(int i, int j) const {
    if (i < 0 || j < 0) throw DomainError("matrix indices must be nonnegative");
    if (i >= size() || j >= size())
        throw SizeCapError("index outside explicit covariance matrix");
    return sigma_(i, j);
}

DiagDominantModel::DiagDominantModel(Eigen::MatrixXd sigma, double margin)
    : sigma_(std::move(sigma)), margin_(margin) {
    if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1)
        throw ConfigError("matrix must be square and nonempty");
    if (!(margin_ > 0.0)) throw ConfigError("dominance margin must be positive");
    for (Eigen::Index i = 0; i < sigma_.rows(); ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < sigma_.cols(); ++j) {
            if (std::abs(sigma_(i, j) - sigma_(j, i)) > 1e-12)
                throw ConfigError("matrix must be symmetric");
            if (j != i) off += std::abs(sigma_(i, j));
        }
        if (sigma_(i, i) - off < margin_ - 1e-15)
            throw ConfigError("row " + std::to_string(i) +
                              " violates the declared dominance margin");
    }
}

double DiagDominantModel::entry(int i, int j) const {
    if (i < 0 || j < 0) throw DomainError("matrix indices must be nonnegative");
    if (i >= size() || j >= size()) throw SizeCapError("index outside matrix");
    return sigma_(i, j);
}

namespace {
ArModel::BetaFn make_const_beta(int order, std::vector<double> v) {
    if (static_cast<int>(v.size()) != order)
        throw ConfigError("AR coefficient vector length must equal the order");
    return [v = std::move(v)](int, int lag) { return v[static_cast<size_t>(lag - 1)]; };
}
}  // namespace

ArModel::ArModel(int order, double delta, std::vector<double> beta_const)
    : ArModel(order, delta, make_const_beta(order, std::move(beta_const))) {
    // constant coefficients: the margin can be checked once up front
    double mass = 0.0;
    for (int l = 1; l <= order_; ++l) mass += std::abs(beta_(1, l));
    if (mass > 1.0 - delta_ + 1e-12)
        throw ConfigError("sum of |beta| exceeds 1 - delta margin");
}

ArModel::ArModel(int order, double delta, BetaFn beta)
    : order_(order), delta_(delta), beta_(std::move(beta)) {
    if (order_ < 1 || order_ > 64) throw ConfigError("AR order must be in 1..64");
    if (!(delta_ > 0.0 && delta_ < 1.0)) throw ConfigError("delta must lie in (0, 1)");
}

double ArModel::envelope_rho() const {
    return std::pow(1.0 - delta_, 1.0 / static_cast<double>(order_));
}

void ArModel::ensure_rows(int m) const {
    for (int i = static_cast<int>(psi_.size()) + 1; i <= m; ++i) {
        std::vector<double> row(static_cast<size_t>(i), 0.0);
        row[static_cast<size_t>(i - 1)] = 1.0;
        double mass = 0.0;
        for (int l = 1; l <= order_; ++l) {
            const double bl = beta_(i, l);
            if (!std::isfinite(bl)) throw ConfigError("AR coefficient must be finite");
            mass += std::abs(bl);
            if (i - l >= 1 && bl != 0.0) {
                const auto& prev = psi_[static_cast<size_t>(i - l - 1)];
                for (size_t k = 0; k < prev.size(); ++k) row[k] += bl * prev[k];
            }
        }
        if (mass > 1.0 - delta_ + 1e-12)
            throw ConfigError("sum of |beta| at index " + std::to_string(i) +
                              " exceeds 1 - delta margin");
        psi_.push_back(std::move(row));
    }
}

double ArModel::entry(int i, int j) const {
    if (i < 0 || j < 0) throw DomainError("indices must be nonnegative");
    const int hi = std::max(i, j) + 1;
    if (hi > 100000) throw SizeCapError("AR index too large");
    ensure_rows(hi);
    const auto& ri = psi_[static_cast<size_t>(i)];
    const auto& rj = psi_[static_cast<size_t>(j)];
    const size_t k_max = std::min(ri.size(), rj.size());
    double dot = 0.0;
    for (size_t k = 0; k < k_max; ++k) dot += ri[k] * rj[k];
    return dot;
}

LatticeModel::LatticeModel(int dim, double variance) : dim_(dim), variance_(variance) {
    if (dim_ < 1 || dim_ > 4) throw ConfigError("lattice dimension must be in 1..4");
    if (!(variance_ > 0.0)) throw ConfigError("kernel variance must be positive");
}

int LatticeModel::shell_point_count(int radius) const {
    int n = 1;
    for (int k = 0; k < dim_; ++k) n *= 2 * radius + 1;
    return n;
}

void LatticeModel::ensure_points(int count) const {
    while (static_cast<int>(points_.size()) < count) {
        const int r = built_radius_ + 1;
        if (shell_point_count(r) > 1000000) throw SizeCapError("lattice block too large");
        // enumerate the centered box of Chebyshev radius r, keep the new shell
        std::vector<std::vector<int>> shell;
        std::vector<int> p(static_cast<size_t>(dim_), -r);
        while (true) {
            int cheb = 0;
            for (int c : p) cheb = std::max(cheb, std::abs(c));
            if (cheb == r) shell.push_back(p);
            int k = dim_ - 1;
            while (k >= 0 && p[static_cast<size_t>(k)] == r) {
                p[static_cast<size_t>(k)] = -r;
                --k;
            }
            if (k < 0) break;
            ++p[static_cast<size_t>(k)];
        }
        std::sort(shell.begin(), shell.end());  // lexicographic within the shell
        for (auto& q : shell) points_.push_back(std::move(q));
        built_radius_ = r;
    }
}

const std::vector<int>& LatticeModel::point(int index) const {
    if (index < 0) throw DomainError("point index must be nonnegative");
    ensure_points(index + 1);
    return points_[static_cast<size_t>(index)];
}

double LatticeModel::entry(int i, int j) const {
    const auto& p = point(i);
    const auto& q = point(j);
    double d2 = 0.0;
    for (int k = 0; k < dim_; ++k) {
        const double d = static_cast<double>(p[static_cast<size_t>(k)] - q[static_cast<size_t>(k)]);
        d2 += d * d;
    }
    return std::exp(-d2 / variance_);
}

// ---------------------------------------------------------------------------
// Fourier-symbol certificate
// ---------------------------------------------------------------------------

double symbol_tail_bound(int order, double variance) {
    if (order < 1) throw DomainError("truncation order must be at least 1");
    const double j1 = static_cast<double>(order + 1);
    const double top = 2.0 * std::exp(-j1 * j1 / variance);
    const double ratio = std::exp(-(2.0 * j1) / variance);
    return top / (1.0 - ratio);
}

int symbol_min_order(double variance, double eps) {
    if (!(variance > 0.0)) throw ConfigError("kernel variance must be positive");
    for (int j = 1; j <= 100000; ++j)
        if (symbol_tail_bound(j, variance) < eps) return j;
    throw ConfigError("no truncation order below cap reaches the requested tail bound");
}

SymbolCertificate symbol_certificate(double variance, int dim, int64_t grid, int order) {
    if (dim < 1 || dim > 4) throw ConfigError("dimension must be in 1..4");
    if (grid < 1024 || grid > (int64_t(1) << 26)) throw ConfigError("grid must be in [2^10, 2^26]");
    SymbolCertificate cert;
    cert.variance = variance;
    cert.dim = dim;
    cert.grid = grid;
    if (order == 0) {
        cert.order = symbol_min_order(variance);
    } else {
        if (symbol_tail_bound(order, variance) >= 1e-12)
            throw ConfigError("requested truncation order leaves an uncertified tail");
        cert.order = order;
    }
    cert.tail = symbol_tail_bound(cert.order, variance);

    std::vector<double> coef(static_cast<size_t>(cert.order));
    double coef_sum = 0.0, lip = 0.0;
    for (int j = 1; j <= cert.order; ++j) {
        const double c = std::exp(-static_cast<double>(j) * j / variance);
        coef[static_cast<size_t>(j - 1)] = c;
        coef_sum += c;
        lip += 2.0 * j * c;
    }
    cert.lipschitz = lip;

    const double h = M_PI / static_cast<double>(grid);
    const double grid_min = chunked_min(grid + 1, [&](int64_t i) {
        const double x = h * static_cast<double>(i);
        double s = 1.0;
        for (int j = 1; j <= cert.order; ++j)
            s += 2.0 * coef[static_cast<size_t>(j - 1)] * std::cos(j * x);
        return s;
    });

    cert.m_g = grid_min - lip * h / 2.0 - cert.tail;
    cert.M_g = 1.0 + 2.0 * coef_sum + cert.tail;
    cert.certified = cert.m_g > 0.0;
    cert.m_f = cert.certified ? std::pow(cert.m_g, dim) : 0.0;
    cert.M_f = std::pow(cert.M_g, dim);
    return cert;
}

// ---------------------------------------------------------------------------
// Certified series helpers
// ---------------------------------------------------------------------------
namespace series {

namespace {
void check_rho(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("decay rate must lie in (0, 1)");
}
}  // namespace

double s_poly(double rho, int p) {
    check_rho(rho);
    double total = 0.0;
    for (int64_t s = 1;; ++s) {
        const double t = std::pow(rho, 2.0 * static_cast<double>(s)) *
                         std::pow(1.0 + 2.0 * static_cast<double>(s), 2.0 * p);
        total += t;
        const double ratio =
            rho * rho *
            std::pow((3.0 + 2.0 * static_cast<double>(s)) / (1.0 + 2.0 * static_cast<double>(s)),
                     2.0 * p);
        // once the term ratio is bounded below 1 it only decreases, so the
        // geometric closed form term * ratio / (1 - ratio) dominates the tail
        if (ratio < 0.999 && t / (1.0 - ratio) < 1e-18 * std::max(total, 1e-300)) {
            total += t * ratio / (1.0 - ratio);
            return total;
        }
        if (s > 100000000) throw NumericError("series cutoff not reached", 0.0);
    }
}

double t_poly(double rho, int p) {
    check_rho(rho);
    double total = 0.0;
    for (int64_t t = 1;; ++t) {
        const double term =
            std::pow(rho, static_cast<double>(t)) * std::pow(1.0 + static_cast<double>(t), p);
        total += term;
        const double ratio =
            rho * std::pow((2.0 + static_cast<double>(t)) / (1.0 + static_cast<double>(t)), p);
        if (ratio < 0.999 && term / (1.0 - ratio) < 1e-18 * std::max(total, 1e-300)) {
            total += term * ratio / (1.0 - ratio);
            return total;
        }
        if (t > 100000000) throw NumericError("series cutoff not reached", 0.0);
    }
}

double q_poly(double rho, int p) {
    check_rho(rho);
    double total = 0.0;
    for (int64_t u = 1;; ++u) {
        const double term = std::pow(rho, 2.0 * static_cast<double>(u)) *
                            std::pow(1.0 + static_cast<double>(u), 2.0 * p);
        total += term;
        const double ratio =
            rho * rho *
            std::pow((2.0 + static_cast<double>(u)) / (1.0 + static_cast<double>(u)), 2.0 * p);
        if (ratio < 0.999 && term / (1.0 - ratio) < 1e-18 * std::max(total, 1e-300)) {
            total += term * ratio / (1.0 - ratio);
            return total;
        }
        if (u > 100000000) throw NumericError("series cutoff not reached", 0.0);
    }
}

double phi_max(double rho, int p) {
    check_rho(rho);
    if (p == 0) return 1.0;
    // rho^s (1+s)^p peaks near s* = p / (-ln rho) - 1
    const double star = static_cast<double>(p) / (-std::log(rho)) - 1.0;
    double best = 1.0;  // s = 0
    for (double s : {std::floor(star), std::ceil(star)}) {
        if (s < 0.0) continue;
        best = std::max(best, std::pow(rho, s) * std::pow(1.0 + s, p));
    }
    return best;
}

double power_weight_sum(int k_max, double eps) {
    double total = 0.0;
    for (int k = 1; k <= k_max; ++k) total += std::pow(static_cast<double>(k), eps);
    return total;
}

double envelope_tail_weighted(double c, double rho, int p, int k_max, int row, double eps) {
    check_rho(rho);
    if (row < 1 || row > k_max) throw DomainError("row must lie inside the table");
    double total = 0.0;
    for (int64_t k = k_max + 1;; ++k) {
        const double dist = static_cast<double>(k - row);
        const double term = c * std::pow(rho, dist) * std::pow(1.0 + dist, p) *
                            std::pow(static_cast<double>(k), eps);
        total += term;
        const double ratio = rho * std::pow((2.0 + dist) / (1.0 + dist), p) *
                             std::pow((static_cast<double>(k) + 1.0) / static_cast<double>(k), eps);
        if (ratio < 0.999 && term * ratio / (1.0 - ratio) < 1e-15 * std::max(total, 1e-300)) {
            total += term * ratio / (1.0 - ratio);
            return total;
        }
        if (k > k_max + 100000000) throw NumericError("series cutoff not reached", 0.0);
    }
}

}  // namespace series

// ---------------------------------------------------------------------------
// Decay tables
// ---------------------------------------------------------------------------

DecayTable decay_table(const CovarianceModel& model, int k_trunc, int num_levels, double c,
                       double rho) {
    if (k_trunc < 2 || k_trunc > 2000) throw ConfigError("table size must be in 2..2000");
    if (num_levels < 0 || num_levels > 8) throw ConfigError("levels must be in 0..8");
    if (!(c > 0.0)) throw ConfigError("envelope constant must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("envelope rate must lie in (0, 1)");

    DecayTable t;
    t.K = k_trunc;
    t.c = c;
    t.rho = rho;

    Eigen::MatrixXd g0(k_trunc, k_trunc);
    for (int i = 0; i < k_trunc; ++i)
        for (int j = 0; j < k_trunc; ++j) {
            const double v = std::abs(model.entry(i, j));
            if (v > c * std::pow(rho, std::abs(i - j)) + 1e-12)
                throw DomainError("base table entry (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ") exceeds the declared envelope");
            g0(i, j) = v;
        }
    t.levels.push_back(std::move(g0));
    t.env_c.push_back(c);
    t.env_p.push_back(0);
    t.slack.push_back(0.0);

    for (int lev = 0; lev < num_levels; ++lev) {
        const Eigen::MatrixXd& g = t.levels.back();
        t.levels.push_back(g + g * g);

        const double cn = t.env_c.back();
        const int pn = t.env_p.back();
        const double sn = t.slack.back();
        // envelope: c_{n+1} = c_n + c_n^2 (1 + 2 S_{p_n}),  p_{n+1} = 2 p_n + 1
        t.env_c.push_back(cn + cn * cn * (1.0 + 2.0 * series::s_poly(rho, pn)));
        t.env_p.push_back(2 * pn + 1);
        // slack: s_{n+1} = s_n (1 + 2 R_n + K s_n) + tau_n with row-sum bound
        // R_n = c_n (1 + 2 T_{p_n}) and dropped-product tail
        // tau_n = c_n^2 phi_max(rho, p_n)^2 Q_{p_n}
        const double row_sum = cn * (1.0 + 2.0 * series::t_poly(rho, pn));
        const double phi = series::phi_max(rho, pn);
        const double tau = cn * cn * phi * phi * series::q_poly(rho, pn);
        t.slack.push_back(sn * (1.0 + 2.0 * row_sum + k_trunc * sn) + tau);
    }
    return t;
}

double decay_row_weighted_sum(const DecayTable& t, int level, int row, double eps) {
    if (level < 0 || level >= static_cast<int>(t.levels.size()))
        throw DomainError("level outside table");
    if (row < 1 || row > t.K) throw DomainError("row outside table");
    const Eigen::MatrixXd& g = t.levels[static_cast<size_t>(level)];
    double total = 0.0;
    for (int k = 1; k <= t.K; ++k)
        total += g(row - 1, k - 1) * std::pow(static_cast<double>(k), eps);
    return total;
}

double decay_certified_weighted_sum(const DecayTable& t, int level, int row, double eps) {
    const double base = decay_row_weighted_sum(t, level, row, eps);
    const double slack_term =
        t.slack[static_cast<size_t>(level)] * series::power_weight_sum(t.K, eps);
    const double tail = series::envelope_tail_weighted(t.env_c[static_cast<size_t>(level)], t.rho,
                                                       t.env_p[static_cast<size_t>(level)], t.K,
                                                       row, eps);
    return base + slack_term + tail;
}

// ---------------------------------------------------------------------------
// Report-producing verifiers
// ---------------------------------------------------------------------------

namespace {

double max_abs_row_sum(const Eigen::MatrixXd& m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) worst = std::max(worst, m.row(i).cwiseAbs().sum());
    return worst;
}

}  // namespace

DiagnosticReport verify_covariance_conditions(const CovarianceModel& model,
                                              const std::vector<int>& sizes, double tol) {
    if (sizes.empty()) throw ConfigError("at least one block size is required");
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1 || sizes[i] > 400) throw ConfigError("block sizes must be in 1..400");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw ConfigError("block sizes must be strictly increasing");
    }

    DiagnosticReport rep;
    rep.command = "gaussian-verify";
    rep.tolerance = tol;

    const auto* lattice = dynamic_cast<const LatticeModel*>(&model);
    const auto* ar = dynamic_cast<const ArModel*>(&model);
    const auto* dd = dynamic_cast<const DiagDominantModel*>(&model);

    SymbolCertificate cert;
    if (lattice) cert = symbol_certificate(lattice->variance(), lattice->dim());

    Trace spectrum;
    spectrum.name = "spectrum";
    spectrum.columns = {"size", "lambda_min", "lambda_max", "max_row_sum"};

    bool interlace_ok = true, rowsum_ok = true, pcorr_ok = true, sandwich_ok = true;
    bool band_ok = true, varcap_ok = true, envelope_ok = true, gersh_ok = true;
    json interlace_w = json::array(), rowsum_w = json::array(), pcorr_w = json::array(),
         sandwich_w = json::array(), band_w = json::array(), varcap_w = json::array(),
         envelope_w = json::array(), gersh_w = json::array();
    double prev_min = 0.0, prev_max = 0.0;
    double max_pcorr = 0.0;
    bool first = true;

    for (int size : sizes) {
        Eigen::MatrixXd block = model.leading(size);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed", 0.0);
        const double lmin = es.eigenvalues()(0);
        const double lmax = es.eigenvalues()(size - 1);
        const double rsum = max_abs_row_sum(block);
        spectrum.add_row({std::to_string(size), format_double(lmin), format_double(lmax),
                          format_double(rsum)});

        if (!first) {
            if (lmin > prev_min + 1e-10 || lmax < prev_max - 1e-10) {
                interlace_ok = false;
                json w;
                w["size"] = size;
                w["lambda_min"] = lmin;
                w["lambda_max"] = lmax;
                w["prev_min"] = prev_min;
                w["prev_max"] = prev_max;
                interlace_w.push_back(w);
            }
        }
        prev_min = lmin;
        prev_max = lmax;
        first = false;

        if (lmax > rsum + 1e-10) {
            rowsum_ok = false;
            json w;
            w["size"] = size;
            w["lambda_max"] = lmax;
            w["max_row_sum"] = rsum;
            rowsum_w.push_back(w);
        }

        try {
            Eigen::MatrixXd pc = partial_correlations(precision_matrix(block));
            for (Eigen::Index i = 0; i < pc.rows(); ++i)
                for (Eigen::Index j = 0; j < pc.cols(); ++j) {
                    max_pcorr = std::max(max_pcorr, std::abs(pc(i, j)));
                    if (std::abs(pc(i, j)) > 1.0 + 1e-10) {
                        pcorr_ok = false;
                        json w;
                        w["size"] = size;
                        w["i"] = static_cast<int>(i);
                        w["j"] = static_cast<int>(j);
                        w["value"] = pc(i, j);
                        pcorr_w.push_back(w);
                    }
                }
        } catch (const NumericError& e) {
            pcorr_ok = false;
            json w;
            w["size"] = size;
            w["error"] = e.what();
            pcorr_w.push_back(w);
        }

        if (lattice && cert.certified) {
            if (lmin < cert.m_f - 1e-8 || lmax > cert.M_f + 1e-8) {
                sandwich_ok = false;
                json w;
                w["size"] = size;
                w["lambda_min"] = lmin;
                w["lambda_max"] = lmax;
                sandwich_w.push_back(w);
            }
        }

        if (ar) {
            const int order = ar->order();
            Eigen::MatrixXd prec = precision_matrix(block);
            for (int i = 0; i < size; ++i) {
                if (block(i, i) > 1.0 / ar->delta() + 1e-10) {
                    varcap_ok = false;
                    json w;
                    w["index"] = i + 1;
                    w["variance"] = block(i, i);
                    varcap_w.push_back(w);
                }
                for (int j = 0; j < size; ++j) {
                    if (std::abs(i - j) > order && std::abs(prec(i, j)) >= tol) {
                        band_ok = false;
                        json w;
                        w["size"] = size;
                        w["i"] = i + 1;
                        w["j"] = j + 1;
                        w["value"] = prec(i, j);
                        band_w.push_back(w);
                    }
                    const double env =
                        ar->envelope_c() * std::pow(ar->envelope_rho(), std::abs(i - j));
                    if (std::abs(block(i, j)) > env + 1e-12) {
                        envelope_ok = false;
                        json w;
                        w["i"] = i + 1;
                        w["j"] = j + 1;
                        w["cov"] = block(i, j);
                        w["envelope"] = env;
                        envelope_w.push_back(w);
                    }
                }
            }
        }

        if (dd && lmin < dd->margin() - 1e-10) {
            gersh_ok = false;
            json w;
            w["size"] = size;
            w["lambda_min"] = lmin;
            w["margin"] = dd->margin();
            gersh_w.push_back(w);
        }
    }

    auto add = [&](const std::string& id, bool ok, json& w) -> Check& {
        Check& c = rep.add_check(id, "covariance-spectrum", ok ? Verdict::pass : Verdict::fail);
        if (!ok) c.witnesses = w;
        return c;
    };
    add("eigenvalue-interlacing", interlace_ok, interlace_w);
    add("spectral-row-sum-bound", rowsum_ok, rowsum_w);
    {
        Check& c = add("partial-correlation-range", pcorr_ok, pcorr_w);
        c.details["max_abs_partial_correlation"] = max_pcorr;
    }
    if (lattice) {
        Verdict v = Verdict::pass;
        if (!cert.certified)
            v = Verdict::inconclusive;
        else if (!sandwich_ok)
            v = Verdict::fail;
        Check& c = rep.add_check("spectrum-symbol-sandwich", "covariance-spectrum", v);
        c.details["order"] = cert.order;
        c.details["tail"] = cert.tail;
        c.details["m_g"] = cert.m_g;
        c.details["M_g"] = cert.M_g;
        c.details["m_f"] = cert.m_f;
        c.details["M_f"] = cert.M_f;
        c.details["certified"] = cert.certified;
        if (!cert.certified)
            c.details["note"] =
                "axis-symbol lower bound is not positive: no spectral floor is claimed";
        if (v == Verdict::fail) c.witnesses = sandwich_w;
    }
    if (ar) {
        add("precision-bandwidth", band_ok, band_w).details["order"] = ar->order();
        add("variance-cap", varcap_ok, varcap_w).details["cap"] = 1.0 / ar->delta();
        Check& c = add("covariance-envelope", envelope_ok, envelope_w);
        c.details["c"] = ar->envelope_c();
        c.details["rho"] = ar->envelope_rho();
    }
    if (dd) add("gershgorin-floor", gersh_ok, gersh_w).details["margin"] = dd->margin();

    rep.add_trace(std::move(spectrum));
    return rep;
}

DiagnosticReport conditional_convergence(const CovarianceModel& model,
                                         const std::vector<int>& targets, int steps, double tol,
                                         double cond_cap) {
    if (targets.empty()) throw ConfigError("at least one target index is required");
    for (int t : targets)
        if (t < 0) throw ConfigError("target indices must be nonnegative");
    if (steps < 2 || steps > 400) throw ConfigError("steps must be in 2..400");

    std::vector<int> sorted_targets = targets;
    std::sort(sorted_targets.begin(), sorted_targets.end());
    if (std::adjacent_find(sorted_targets.begin(), sorted_targets.end()) != sorted_targets.end())
        throw ConfigError("target indices must be distinct");

    // conditioning prefix: the first `steps` non-target indices in model order
    std::vector<int> pool;
    for (int i = 0; static_cast<int>(pool.size()) < steps; ++i) {
        if (i > 100000) throw SizeCapError("conditioning prefix too large");
        if (!std::binary_search(sorted_targets.begin(), sorted_targets.end(), i)) pool.push_back(i);
    }
    const int top = std::max(pool.back(), sorted_targets.back()) + 1;
    Eigen::MatrixXd sigma = model.leading(top);

    DiagnosticReport rep;
    rep.command = "gaussian-converge";
    rep.tolerance = tol;

    Trace tr;
    tr.name = "conditional-covariance";
    tr.columns = {"step", "max_diff"};
    for (size_t i = 0; i < targets.size(); ++i)
        for (size_t j = i; j < targets.size(); ++j)
            tr.columns.push_back("cov_" + std::to_string(targets[i]) + "_" +
                                 std::to_string(targets[j]));

    Eigen::MatrixXd prev;
    std::vector<double> diffs;
    for (int n = 1; n <= steps; ++n) {
        std::vector<int> b(pool.begin(), pool.begin() + n);
        ConditionalResult cond = gaussian_conditional(sigma, targets, b, cond_cap);
        std::vector<std::string> row{std::to_string(n)};
        double diff = 0.0;
        if (n > 1) {
            diff = (cond.cov - prev).cwiseAbs().maxCoeff();
            diffs.push_back(diff);
        }
        row.push_back(n > 1 ? format_double(diff) : std::string("nan"));
        for (size_t i = 0; i < targets.size(); ++i)
            for (size_t j = i; j < targets.size(); ++j)
                row.push_back(format_double(cond.cov(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j))));
        tr.add_row(row);
        prev = cond.cov;
    }

    // Cauchy criterion on the trailing window of max-norm differences
    const size_t window = std::max<size_t>(2, diffs.size() / 4);
    bool cauchy = diffs.size() >= window;
    for (size_t i = diffs.size() - std::min(window, diffs.size()); i < diffs.size(); ++i)
        if (diffs[i] > tol) cauchy = false;

    Check& c = rep.add_check("conditional-covariance-cauchy", "conditional-convergence",
                             cauchy ? Verdict::pass : Verdict::inconclusive);
    c.details["steps"] = steps;
    c.details["window"] = static_cast<int64_t>(window);
    c.details["last_diff"] = diffs.empty() ? 0.0 : diffs.back();
    if (!cauchy)
        c.details["note"] =
            "differences did not settle below tolerance: no divergence claim is made";
    json limit = json::array();
    for (size_t i = 0; i < targets.size(); ++i)
        for (size_t j = i; j < targets.size(); ++j)
            limit.push_back(prev(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    c.details["last_iterate"] = limit;
    rep.add_trace(std::move(tr));
    return rep;
}

}  // namespace markovia
