#include "bosegas/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bosegas/constants.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

namespace {

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    return Eigen::Map<const Eigen::VectorXd>(a.data(), a.size())
        .dot(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
}

double vnorm(const std::vector<double>& a) {
    return Eigen::Map<const Eigen::VectorXd>(a.data(), a.size()).norm();
}

void vaxpy(double c, const std::vector<double>& x, std::vector<double>& y) {
    Eigen::Map<Eigen::VectorXd>(y.data(), y.size()) +=
        c * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
}

void vscale(double c, std::vector<double>& x) {
    Eigen::Map<Eigen::VectorXd>(x.data(), x.size()) *= c;
}

// Fill with unit-norm random data orthogonal to the given columns. Returns
// false when the columns already span the space.
bool fresh_direction(std::vector<double>& w, const std::vector<std::vector<double>>& basis,
                     std::uint64_t key, std::uint64_t& attempt) {
    for (int tries = 0; tries < 8; ++tries) {
        const std::uint64_t sub = rng::mix(key + ++attempt);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng::normal(sub, i);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& qi : basis) vaxpy(-vdot(qi, w), qi, w);
        const double nw = vnorm(w);
        if (nw > 1e-6 * std::sqrt(static_cast<double>(w.size()))) {
            vscale(1.0 / nw, w);
            return true;
        }
    }
    return false;
}

} // namespace

void HamiltonianSpec::validate() const {
    grid.validate();
    if (potential.size() != grid.size())
        throw ShapeMismatch("Hamiltonian: potential does not match grid");
    if (!(hbar > 0.0) || !(mass > 0.0))
        throw NonPositiveInput("Hamiltonian: hbar and mass must be > 0");
}

double HamiltonianSpec::norm_bound() const {
    const double t = hbar * hbar / (2.0 * mass * grid.spacing * grid.spacing);
    double vmax = 0.0;
    for (double v : potential) vmax = std::max(vmax, std::abs(v));
    return vmax + 4.0 * t * grid.dimension;
}

void apply_hamiltonian(const HamiltonianSpec& h, const double* in, double* out) {
    const Grid& g = h.grid;
    const std::size_t total = g.size();
    const double t = h.hbar * h.hbar / (2.0 * h.mass * g.spacing * g.spacing);
    const double diag_kin = 2.0 * t * g.dimension;
    for (std::size_t i = 0; i < total; ++i) out[i] = (h.potential[i] + diag_kin) * in[i];

    std::size_t stride = total;
    for (int a = 0; a < g.dimension; ++a) {
        const std::size_t n = static_cast<std::size_t>(g.shape[a]);
        stride /= n;
        const std::size_t line = n * stride;
        for (std::size_t base = 0; base < total; base += line) {
            for (std::size_t inner = 0; inner < stride; ++inner) {
                const double* x = in + base + inner;
                double* o = out + base + inner;
                for (std::size_t c = 0; c < n; ++c) {
                    double acc = 0.0;
                    if (c > 0) acc += x[(c - 1) * stride];
                    else if (g.periodic) acc += x[(n - 1) * stride];
                    if (c + 1 < n) acc += x[(c + 1) * stride];
                    else if (g.periodic) acc += x[0];
                    o[c * stride] -= t * acc;
                }
            }
        }
    }
}

std::vector<double> apply_hamiltonian(const HamiltonianSpec& h, const std::vector<double>& in) {
    h.validate();
    if (in.size() != h.grid.size()) throw ShapeMismatch("apply_hamiltonian: input size mismatch");
    std::vector<double> out(in.size());
    apply_hamiltonian(h, in.data(), out.data());
    return out;
}

EigenSet lowest_eigenpairs(const HamiltonianSpec& h, const EigenOptions& opt) {
    h.validate();
    const std::size_t n = h.grid.size();
    const int k = opt.count;
    if (k < 1) throw ValidationError("lowest_eigenpairs: count must be >= 1");
    if (static_cast<std::size_t>(k) >= n)
        throw ValidationError("lowest_eigenpairs: count must be below the grid size");
    const int m = static_cast<int>(
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opt.max_basis, 2 * k + 8))));
    const double scale = h.norm_bound();
    const double tol_abs = opt.tol * scale;
    const double tiny = 1e-13 * scale;
    const std::uint64_t key = rng::derive_key({opt.start_seed, 0}, 0x1a9c205ull);
    std::uint64_t attempt = 0;

    std::vector<std::vector<double>> q;
    q.reserve(static_cast<std::size_t>(m) + 1);
    {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = rng::normal(key, i);
        vscale(1.0 / vnorm(v), v);
        q.push_back(std::move(v));
    }

    Eigen::MatrixXd t_proj = Eigen::MatrixXd::Zero(m, m);
    int p = 0;
    int matvecs = 0;
    const double hd = h.grid.cell_volume();
    EigenSet best;
    best.scale = scale;

    for (int restart = 0; restart < opt.max_restarts; ++restart) {
        double beta_last = 0.0;
        std::vector<double> next;
        for (int col = p; col < m; ++col) {
            std::vector<double> w(n);
            apply_hamiltonian(h, q[static_cast<std::size_t>(col)].data(), w.data());
            ++matvecs;
            t_proj(col, col) = vdot(q[static_cast<std::size_t>(col)], w);
            // Full reorthogonalization replaces the three-term bookkeeping;
            // two classical Gram-Schmidt passes keep the basis orthonormal
            // to rounding.
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= col; ++i) vaxpy(-vdot(q[static_cast<std::size_t>(i)], w), q[static_cast<std::size_t>(i)], w);
            double beta = vnorm(w);
            bool decoupled = false;
            if (beta <= tiny) {
                decoupled = true;
                if (!fresh_direction(w, q, key, attempt)) {
                    // Basis spans an invariant subspace that already contains
                    // everything reachable; the projected solve is exact.
                    beta = 0.0;
                    w.assign(n, 0.0);
                }
            } else {
                vscale(1.0 / beta, w);
            }
            if (col + 1 < m) {
                t_proj(col, col + 1) = t_proj(col + 1, col) = decoupled ? 0.0 : beta;
                q.push_back(std::move(w));
            } else {
                beta_last = decoupled ? 0.0 : beta;
                next = std::move(w);
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t_proj);
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Eigen::MatrixXd& s = es.eigenvectors();

        bool bounds_ok = true;
        for (int i = 0; i < k; ++i)
            if (std::abs(beta_last * s(m - 1, i)) > tol_abs) bounds_ok = false;

        auto extract = [&](int count_out) {
            EigenSet set;
            set.scale = scale;
            for (int i = 0; i < count_out; ++i) {
                std::vector<double> x(n, 0.0);
                for (int j = 0; j < m; ++j) vaxpy(s(j, i), q[static_cast<std::size_t>(j)], x);
                vscale(1.0 / vnorm(x), x);
                std::vector<double> hx(n);
                apply_hamiltonian(h, x.data(), hx.data());
                ++matvecs;
                const double e = vdot(x, hx);
                vaxpy(-e, x, hx);
                set.energies.push_back(e);
                set.residuals.push_back(vnorm(hx));
                vscale(1.0 / std::sqrt(hd), x);
                set.modes.push_back(std::move(x));
            }
            // Rayleigh quotients of near-degenerate pairs can land out of
            // order at rounding level; keep the ascending contract exact.
            std::vector<int> order(set.energies.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int l, int rgt) { return set.energies[static_cast<std::size_t>(l)] < set.energies[static_cast<std::size_t>(rgt)]; });
            EigenSet sorted;
            sorted.scale = set.scale;
            sorted.matvecs = matvecs;
            for (int idx : order) {
                sorted.energies.push_back(set.energies[static_cast<std::size_t>(idx)]);
                sorted.residuals.push_back(set.residuals[static_cast<std::size_t>(idx)]);
                sorted.modes.push_back(std::move(set.modes[static_cast<std::size_t>(idx)]));
            }
            return sorted;
        };

        if (bounds_ok) {
            EigenSet set = extract(k);
            if (*std::max_element(set.residuals.begin(), set.residuals.end()) <= tol_abs)
                return set;
            best = std::move(set);
        } else if (restart + 1 == opt.max_restarts) {
            best = extract(k);
        }

        // Thick restart: lock the lowest Ritz vectors plus a buffer and
        // continue from the saved residual direction.
        const int keep = std::min(k + 8, m - 2);
        std::vector<std::vector<double>> locked;
        locked.reserve(static_cast<std::size_t>(keep) + 1);
        for (int i = 0; i < keep; ++i) {
            std::vector<double> y(n, 0.0);
            for (int j = 0; j < m; ++j) vaxpy(s(j, i), q[static_cast<std::size_t>(j)], y);
            vscale(1.0 / vnorm(y), y);
            locked.push_back(std::move(y));
        }
        if (vnorm(next) < 0.5 && !fresh_direction(next, locked, key, attempt))
            throw EigenNoConvergence("lowest_eigenpairs: stalled without a continuation direction",
                                     best);
        locked.push_back(std::move(next));
        q = std::move(locked);
        t_proj.setZero();
        for (int i = 0; i < keep; ++i) {
            t_proj(i, i) = theta(i);
            t_proj(i, keep) = t_proj(keep, i) = beta_last * s(m - 1, i);
        }
        p = keep;
    }
    throw EigenNoConvergence("lowest_eigenpairs: restart budget exhausted", best);
}

EigenSet dense_spectrum(const HamiltonianSpec& h, int count, bool vectors) {
    h.validate();
    const std::size_t n = h.grid.size();
    if (n > 4096) throw ValidationError("dense_spectrum: reference route capped at 4096 points");
    if (count < 1 || static_cast<std::size_t>(count) > n)
        throw ValidationError("dense_spectrum: bad count");
    const Grid& g = h.grid;
    const double t = h.hbar * h.hbar / (2.0 * h.mass * g.spacing * g.spacing);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double diag_kin = 2.0 * t * g.dimension;
    for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = h.potential[i] + diag_kin;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = g.unindex(i);
        for (int axis = 0; axis < g.dimension; ++axis) {
            const int nc = g.shape[axis];
            if (c[axis] + 1 < nc) {
                auto cc = c;
                cc[axis] += 1;
                const auto j = g.index(cc[0], cc[1], cc[2]);
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= t;
                a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) -= t;
            } else if (g.periodic) {
                auto cc = c;
                cc[axis] = 0;
                const auto j = g.index(cc[0], cc[1], cc[2]);
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= t;
                a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) -= t;
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    EigenSet set;
    set.scale = h.norm_bound();
    for (int i = 0; i < count; ++i) set.energies.push_back(es.eigenvalues()(i));
    if (vectors) {
        const double hd = g.cell_volume();
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXd x = es.eigenvectors().col(i);
            std::vector<double> mode(x.data(), x.data() + x.size());
            std::vector<double> hx(n);
            apply_hamiltonian(h, mode.data(), hx.data());
            vaxpy(-set.energies[static_cast<std::size_t>(i)], mode, hx);
            set.residuals.push_back(vnorm(hx));
            vscale(1.0 / std::sqrt(hd), mode);
            set.modes.push_back(std::move(mode));
        }
    }
    return set;
}

LocalizationMetrics localization_metrics(const Field& mode) {
    mode.check_consistent();
    const Grid& g = mode.grid;
    const double hd = g.cell_volume();
    double norm = 0.0;
    double quart = 0.0;
    for (double v : mode.values) {
        norm += v * v;
        quart += v * v * v * v;
    }
    norm *= hd;
    quart *= hd;
    if (!(norm > 0.0)) throw UnnormalizedInput("localization_metrics: mode has zero norm");

    LocalizationMetrics out;
    out.ipr = quart / (norm * norm);
    out.participation_volume = 1.0 / out.ipr;

    for (int a = 0; a < g.dimension; ++a) {
        const double len = g.extent(a);
        if (g.periodic) {
            double cs = 0.0;
            double sn = 0.0;
            for (std::size_t i = 0; i < mode.size(); ++i) {
                const double w = mode[i] * mode[i] * hd / norm;
                const double ang = 2.0 * pi * (g.position(g.unindex(i)[a], a) + 0.5 * len) / len;
                cs += w * std::cos(ang);
                sn += w * std::sin(ang);
            }
            double ang = std::atan2(sn, cs);
            if (ang < 0.0) ang += 2.0 * pi;
            out.centroid[a] = ang / (2.0 * pi) * len - 0.5 * len;
        } else {
            double c = 0.0;
            for (std::size_t i = 0; i < mode.size(); ++i)
                c += mode[i] * mode[i] * hd / norm * g.position(g.unindex(i)[a], a);
            out.centroid[a] = c;
        }
    }

    double second = 0.0;
    for (std::size_t i = 0; i < mode.size(); ++i) {
        const double w = mode[i] * mode[i] * hd / norm;
        const auto c = g.unindex(i);
        double r2 = 0.0;
        for (int a = 0; a < g.dimension; ++a) {
            double d = g.position(c[a], a) - out.centroid[a];
            if (g.periodic) {
                const double len = g.extent(a);
                d -= len * std::round(d / len);
            }
            r2 += d * d;
        }
        second += w * r2;
    }
    out.rms_radius = std::sqrt(second);
    return out;
}

namespace {

struct TailData {
    std::vector<double> x; // |E| / E0
    std::vector<double> y; // ln N
    std::vector<double> w; // counting weight of each order statistic
    std::size_t saturated = 0;
};

// E[min(N, k)] for N ~ Poisson(lambda): what a box that records its k lowest
// levels contributes on average once lambda levels sit below the probe energy.
double poisson_recorded_mean(double lambda, int k) {
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    double sum = 0.0;
    for (int j = 1; j <= k; ++j) {
        sum += 1.0 - cdf;
        pmf *= lambda / j;
        cdf += pmf;
    }
    return sum;
}

// Invert the mean recorded count back to the Poisson rate. k_hist maps the
// number of recorded levels per realization to how many realizations use it.
double invert_recorded_mean(double target, const std::vector<std::pair<int, int>>& k_hist,
                            double realizations) {
    const auto mean_at = [&](double lambda) {
        double s = 0.0;
        for (const auto& [k, cnt] : k_hist) s += cnt * poisson_recorded_mean(lambda, k);
        return s / realizations;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60 && mean_at(hi) < target; ++it) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_at(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Censored per-box likelihood of the recorded levels. Inside the window the
// levels of a box form a Poisson process in the integrated count, so each
// observed level contributes the intensity nu(E) = lambda(E) a p x^(p-1) / E0
// with lambda(E) = e^theta exp(-a x^p), and each box contributes the
// probability that the rest of its visible window is empty. A box that filled
// all of its recording slots is blind above its shallowest record, so its
// censor point drops from the window top to that level.
struct CensoredSample {
    std::vector<double> x;    // observed depths |E| / E0
    std::vector<double> cut;  // per-box censor depth
    std::vector<double> base; // per-box depth of the window floor (inf if none)
    double sum_log_x = 0.0;
};

CensoredSample censor_levels(const std::vector<std::vector<double>>& levels,
                             double energy_scale, double lo, double hi) {
    CensoredSample s;
    s.cut.reserve(levels.size());
    s.base.reserve(levels.size());
    for (const auto& lv : levels) {
        double shallowest = -std::numeric_limits<double>::infinity();
        for (double e : lv) shallowest = std::max(shallowest, e);
        double cut = shallowest <= hi ? shallowest : hi;
        cut = std::max(cut, lo);
        for (double e : lv)
            if (e >= lo && e <= cut) s.x.push_back(-e / energy_scale);
        s.cut.push_back(-cut / energy_scale);
        s.base.push_back(-lo / energy_scale);
    }
    for (double v : s.x) s.sum_log_x += std::log(v);
    return s;
}

// Log likelihood at fixed exponent p, maximized over the amplitude theta in
// closed form and over the coefficient a by golden section. The additive
// constants independent of the parameters are dropped.
double profile_loglike(const CensoredSample& s, double p, double& a_hat,
                       double* theta_hat = nullptr) {
    const double n = static_cast<double>(s.x.size());
    double sxp = 0.0;
    for (double v : s.x) sxp += std::pow(v, p);
    std::vector<double> wcut(s.cut.size()), wbase(s.base.size());
    for (std::size_t i = 0; i < s.cut.size(); ++i) wcut[i] = std::pow(s.cut[i], p);
    for (std::size_t i = 0; i < s.base.size(); ++i)
        wbase[i] = std::isinf(s.base[i]) ? std::numeric_limits<double>::infinity()
                                         : std::pow(s.base[i], p);
    const auto ll = [&](double a) {
        double sm = 0.0;
        for (std::size_t i = 0; i < wcut.size(); ++i) {
            double m = std::exp(-a * wcut[i]);
            if (!std::isinf(wbase[i])) m -= std::exp(-a * wbase[i]);
            sm += m;
        }
        if (!(sm > 0.0)) return -std::numeric_limits<double>::infinity();
        return n * (std::log(n) - std::log(sm)) - a * sxp + n * std::log(a * p) +
               (p - 1.0) * s.sum_log_x;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(1e-4);
    double hi = std::log(50.0);
    double a1 = hi - phi * (hi - lo);
    double a2 = lo + phi * (hi - lo);
    double f1 = ll(std::exp(a1));
    double f2 = ll(std::exp(a2));
    for (int it = 0; it < 70; ++it) {
        if (f1 >= f2) {
            hi = a2;
            a2 = a1;
            f2 = f1;
            a1 = hi - phi * (hi - lo);
            f1 = ll(std::exp(a1));
        } else {
            lo = a1;
            a1 = a2;
            f1 = f2;
            a2 = lo + phi * (hi - lo);
            f2 = ll(std::exp(a2));
        }
    }
    a_hat = std::exp(0.5 * (lo + hi));
    const double best = ll(a_hat);
    if (theta_hat) {
        double sm = 0.0;
        for (std::size_t i = 0; i < wcut.size(); ++i) {
            double m = std::exp(-a_hat * wcut[i]);
            if (!std::isinf(wbase[i])) m -= std::exp(-a_hat * wbase[i]);
            sm += m;
        }
        *theta_hat = std::log(n) - std::log(sm);
    }
    return best;
}

double mle_exponent(const CensoredSample& s, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double p1 = hi - phi * (hi - lo);
    double p2 = lo + phi * (hi - lo);
    double a;
    double f1 = profile_loglike(s, p1, a);
    double f2 = profile_loglike(s, p2, a);
    for (int it = 0; it < 60; ++it) {
        if (f1 >= f2) {
            hi = p2;
            p2 = p1;
            f2 = f1;
            p1 = hi - phi * (hi - lo);
            f1 = profile_loglike(s, p1, a);
        } else {
            lo = p1;
            p1 = p2;
            f1 = f2;
            p2 = lo + phi * (hi - lo);
            f2 = profile_loglike(s, p2, a);
        }
    }
    return 0.5 * (lo + hi);
}

// Pool the events inside the window into the regression coordinates. A box
// that records its k lowest levels reports min(N, k) of the N levels below a
// probe energy, so the raw pooled rank saturates near k per box and would
// flatten the shallow edge of the fit; invert the Poisson mean instead. The
// i-th order statistic still aggregates i+1 counts, so its log keeps variance
// ~ 1/(i+1); weight accordingly.
bool pool_events(const std::vector<std::vector<double>>& levels, double volume,
                 double energy_scale, double lo, double hi, TailData& data) {
    std::vector<double> pooled;
    std::vector<std::pair<int, int>> k_hist;
    double k_mean = 0.0;
    for (const auto& lv : levels) {
        const int k = static_cast<int>(lv.size());
        k_mean += k;
        auto it = std::find_if(k_hist.begin(), k_hist.end(),
                               [&](const auto& e) { return e.first == k; });
        if (it == k_hist.end())
            k_hist.emplace_back(k, 1);
        else
            ++it->second;
        for (double e : lv)
            if (e >= lo && e <= hi) pooled.push_back(e);
    }
    const double r = static_cast<double>(levels.size());
    k_mean /= r;
    if (pooled.size() < 3) return false;
    std::sort(pooled.begin(), pooled.end());
    data.x.clear();
    data.y.clear();
    data.w.clear();
    data.saturated = 0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        const double recorded = static_cast<double>(i + 1) / r;
        if (recorded >= 0.95 * k_mean) {
            // the recorded count can no longer follow the true one
            data.saturated = pooled.size() - i;
            break;
        }
        data.x.push_back(-pooled[i] / energy_scale);
        data.y.push_back(std::log(invert_recorded_mean(recorded, k_hist, r) / volume));
        data.w.push_back(static_cast<double>(i + 1));
    }
    return data.x.size() >= 3;
}

} // namespace

TailFit fit_integrated_dos(const std::vector<std::vector<double>>& levels_per_realization,
                           double volume, double energy_scale,
                           std::optional<std::pair<double, double>> window,
                           double auto_quantile, int min_events, int bootstrap,
                           std::uint64_t bootstrap_key) {
    const std::size_t r = levels_per_realization.size();
    if (r < 100) throw EnsembleTooSmall("fit_integrated_dos: need at least 100 realizations");
    if (!(volume > 0.0)) throw NonPositiveInput("fit_integrated_dos: volume must be > 0");
    if (!(energy_scale > 0.0)) throw NonPositiveInput("fit_integrated_dos: energy scale must be > 0");

    std::vector<double> grounds;
    grounds.reserve(r);
    for (const auto& lv : levels_per_realization) {
        if (lv.empty()) throw EnsembleTooSmall("fit_integrated_dos: a realization has no levels");
        grounds.push_back(*std::min_element(lv.begin(), lv.end()));
    }

    TailFit fit;
    fit.energy_scale = energy_scale;
    fit.realizations = r;
    double lo = -std::numeric_limits<double>::infinity();
    double hi;
    if (window) {
        lo = window->first;
        hi = window->second;
    } else {
        // deepest grounds plus one energy scale of headroom: the stretched
        // exponential only describes levels well below the bulk edge
        hi = stats::quantile(grounds, auto_quantile) + energy_scale;
    }
    if (!(hi < 0.0))
        throw WindowTooNarrow("fit_integrated_dos: window must lie at negative energies");
    fit.window = {lo, hi};

    const CensoredSample sample = censor_levels(levels_per_realization, energy_scale, lo, hi);
    if (sample.x.size() < static_cast<std::size_t>(std::max(min_events, 3)))
        throw WindowTooNarrow("fit_integrated_dos: too few tail events in the window");
    fit.events = sample.x.size();

    constexpr double kPLo = 0.25;
    constexpr double kPHi = 4.0;
    fit.exponent = mle_exponent(sample, kPLo, kPHi);
    double a_hat, theta_hat;
    profile_loglike(sample, fit.exponent, a_hat, &theta_hat);
    fit.coefficient = a_hat;
    fit.log_amplitude = theta_hat - std::log(volume);
    if (a_hat < 1.1e-4 || a_hat > 47.0)
        fit.warnings.push_back(
            {"bad_tail_shape", "fitted tail coefficient pinned at the search boundary"});
    if (fit.exponent < kPLo + 0.01 || fit.exponent > kPHi - 0.01)
        fit.warnings.push_back({"exponent_at_bound", "tail exponent hit the search boundary"});

    // observed information of the profiled likelihood; the curvature step is
    // well inside the golden-section resolution
    const double dp = 0.02;
    const double pc = std::clamp(fit.exponent, kPLo + dp, kPHi - dp);
    double lls[3];
    for (int s = -1; s <= 1; ++s) {
        double atmp;
        lls[s + 1] = profile_loglike(sample, pc + s * dp, atmp);
    }
    const double curvature = (lls[0] - 2.0 * lls[1] + lls[2]) / (dp * dp);
    const double fisher = curvature < 0.0 ? 1.0 / std::sqrt(-curvature) : 0.0;

    // the diagnostic rank curve: residual scatter against the fitted law, and
    // the saturation note where the recorded count stops tracking the tail
    TailData data;
    if (pool_events(levels_per_realization, volume, energy_scale, lo, hi, data)) {
        double sw = 0.0;
        double sse = 0.0;
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const double res =
                data.y[i] - (fit.log_amplitude - a_hat * std::pow(data.x[i], fit.exponent));
            sw += data.w[i];
            sse += data.w[i] * res * res;
        }
        fit.fit_rms = std::sqrt(sse / sw);
        if (data.saturated > 0)
            fit.warnings.push_back({"count_saturated",
                                    "shallow events were dropped where the recorded count can "
                                    "no longer track the level count"});
    }

    std::vector<double> replicates;
    for (int b = 0; b < bootstrap; ++b) {
        const auto idx = stats::bootstrap_indices(r, bootstrap_key, static_cast<std::size_t>(b));
        std::vector<std::vector<double>> resampled;
        resampled.reserve(r);
        for (auto i : idx) resampled.push_back(levels_per_realization[i]);
        const CensoredSample rep = censor_levels(resampled, energy_scale, lo, hi);
        if (rep.x.size() < 3) continue;
        replicates.push_back(mle_exponent(rep, kPLo, kPHi));
    }
    fit.exponent_error = fisher;
    if (replicates.size() >= 8) {
        fit.exponent_error = std::max(fisher, std::sqrt(stats::variance(replicates)));
    } else if (bootstrap > 0) {
        fit.warnings.push_back({"bootstrap_failed", "too few usable bootstrap replicates"});
    }
    return fit;
}

TailFit dos_tail_fit(const TailEnsembleConfig& cfg) {
    if (cfg.realizations < 100)
        throw EnsembleTooSmall("dos_tail_fit: need at least 100 realizations");
    if (cfg.levels < 1) throw ValidationError("dos_tail_fit: levels must be >= 1");
    cfg.disorder.validate(cfg.grid.dimension);

    const std::size_t r = static_cast<std::size_t>(cfg.realizations);
    std::vector<std::vector<double>> levels(r);
    parallel_for(r, cfg.threads, [&](std::size_t i) {
        const Field u =
            synthesize(cfg.disorder, cfg.grid, cfg.seed.with_realization(cfg.seed.realization + i));
        HamiltonianSpec h{cfg.grid, u.values, cfg.hbar, cfg.mass};
        EigenOptions opt;
        opt.count = cfg.levels;
        opt.tol = cfg.eigen_tol;
        levels[i] = lowest_eigenpairs(h, opt).energies;
    });

    double e0 = cfg.energy_scale;
    if (e0 <= 0.0) {
        if (cfg.disorder.correlated() && cfg.disorder.kind != DisorderKind::OrnsteinZernike) {
            e0 = cfg.disorder.strength;
        } else {
            const double kappa = cfg.disorder.white_noise_equivalent(cfg.grid.dimension);
            const double l = std::pow(std::pow(cfg.hbar, 4) / (cfg.mass * cfg.mass * kappa * kappa),
                                      1.0 / (4.0 - cfg.grid.dimension));
            e0 = cfg.hbar * cfg.hbar / (2.0 * cfg.mass * l * l);
        }
    }
    const std::uint64_t key = rng::derive_key(cfg.seed, 0xb007ull);
    return fit_integrated_dos(levels, cfg.grid.volume(), e0, cfg.window, cfg.auto_quantile,
                              cfg.min_events, cfg.bootstrap, key);
}

} // namespace bosegas
