#include "bosegas/fragments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bosegas/constants.hpp"

namespace bosegas {

namespace {

// Index of the nearest other fragment by minimum-image centroid distance.
std::size_t nearest_neighbor(const FragmentReport& rep, const Grid& g, std::size_t i,
                             double& distance) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t j = 0; j < rep.fragments.size(); ++j) {
        if (j == i) continue;
        double d2 = 0.0;
        for (int a = 0; a < g.dimension; ++a) {
            double d = rep.fragments[i].centroid[a] - rep.fragments[j].centroid[a];
            if (g.periodic) {
                const double len = g.extent(a);
                d -= len * std::round(d / len);
            }
            d2 += d * d;
        }
        if (d2 < best) {
            best = d2;
            arg = j;
        }
    }
    distance = std::sqrt(best);
    return arg;
}

} // namespace

// Components carry unwrapped integer offsets from their root so centroid and
// radius come out right across the periodic seam, and so wrapping shows up:
// a cell reached again at a different unwrapped offset circles the box.
FragmentReport detect_fragments(const Field& density, const ThresholdPolicy& policy,
                                const Field* potential) {
    density.check_consistent();
    const Grid& g = density.grid;
    const std::size_t m = g.size();
    const double peak = density.max();
    if (density.min() < -1e-12 * std::max(peak, 1.0))
        throw ValidationError("detect_fragments: density must be nonnegative");

    FragmentReport rep;
    rep.mass_total = density.integral();

    std::vector<char> occupied(m, 0);
    switch (policy.kind) {
        case ThresholdPolicy::Kind::Relative:
            if (!(policy.value > 0.0) || policy.value >= 1.0)
                throw ValidationError("detect_fragments: relative threshold must be in (0, 1)");
            rep.threshold = policy.value * peak;
            for (std::size_t i = 0; i < m; ++i) occupied[i] = density[i] > rep.threshold;
            break;
        case ThresholdPolicy::Kind::Absolute:
            if (!(policy.value >= 0.0))
                throw ValidationError("detect_fragments: absolute threshold must be >= 0");
            rep.threshold = policy.value;
            for (std::size_t i = 0; i < m; ++i) occupied[i] = density[i] > rep.threshold;
            break;
        case ThresholdPolicy::Kind::MuLevel: {
            if (!potential)
                throw MissingParameter("detect_fragments: mu_level policy needs the potential");
            potential->check_consistent();
            if (!potential->grid.same_shape(g))
                throw ShapeMismatch("detect_fragments: potential grid does not match density");
            rep.threshold = 0.0;
            for (std::size_t i = 0; i < m; ++i) occupied[i] = (*potential)[i] < policy.value;
            break;
        }
    }

    std::size_t occupied_cells = 0;
    for (char c : occupied) occupied_cells += c;
    rep.occupied_fraction = static_cast<double>(occupied_cells) / static_cast<double>(m);
    if (occupied_cells == 0) {
        rep.warnings.push_back({"empty_above_threshold", "no cell passes the threshold"});
        return rep;
    }

    const double hd = g.cell_volume();
    std::vector<int> label(m, -1);
    std::vector<std::array<long long, 3>> unwrapped(m);
    std::vector<std::size_t> stack;

    for (std::size_t seed = 0; seed < m; ++seed) {
        if (!occupied[seed] || label[seed] >= 0) continue;
        const int id = static_cast<int>(rep.fragments.size());
        Fragment frag;
        const auto root = g.unindex(seed);
        label[seed] = id;
        unwrapped[seed] = {0, 0, 0};
        stack.assign(1, seed);

        double wsum = 0.0;
        std::array<double, 3> first = {0.0, 0.0, 0.0};
        std::array<double, 3> second = {0.0, 0.0, 0.0};

        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            const double w = density[cur];
            frag.cells += 1;
            frag.particle_count += w * hd;
            if (w > frag.peak_density) {
                frag.peak_density = w;
                frag.peak_site = cur;
            }
            wsum += w;
            for (int a = 0; a < g.dimension; ++a) {
                const double x = static_cast<double>(unwrapped[cur][a]);
                first[a] += w * x;
                second[a] += w * x * x;
            }

            const auto c = g.unindex(cur);
            for (int a = 0; a < g.dimension; ++a) {
                for (int dir = -1; dir <= 1; dir += 2) {
                    int cc = c[a] + dir;
                    if (cc < 0 || cc >= g.shape[a]) {
                        if (!g.periodic) continue;
                        cc = g.wrap(cc, a);
                    }
                    auto coords = c;
                    coords[a] = cc;
                    const std::size_t nb = g.index(coords[0], coords[1], coords[2]);
                    if (!occupied[nb]) continue;
                    auto off = unwrapped[cur];
                    off[a] += dir;
                    if (label[nb] < 0) {
                        label[nb] = id;
                        unwrapped[nb] = off;
                        stack.push_back(nb);
                    } else if (unwrapped[nb] != off) {
                        frag.wraps = true;
                    }
                }
            }
        }

        double r2 = 0.0;
        for (int a = 0; a < g.dimension; ++a) {
            const double mean = first[a] / wsum;
            r2 += second[a] / wsum - mean * mean;
            double pos = g.position(root[a], a) + mean * g.spacing;
            if (g.periodic) {
                const double len = g.extent(a);
                pos -= len * std::floor((pos + 0.5 * len) / len);
            }
            frag.centroid[a] = pos;
        }
        frag.rms_radius = g.spacing * std::sqrt(std::max(0.0, r2));
        rep.mass_inside += frag.particle_count;
        rep.percolates = rep.percolates || frag.wraps;
        rep.fragments.push_back(frag);
    }

    std::sort(rep.fragments.begin(), rep.fragments.end(), [](const Fragment& a, const Fragment& b) {
        return a.particle_count > b.particle_count;
    });
    for (std::size_t i = 0; i < rep.fragments.size(); ++i)
        rep.fragments[i].id = static_cast<int>(i);
    rep.captured_fraction = rep.mass_total > 0.0 ? rep.mass_inside / rep.mass_total : 0.0;

    if (rep.fragments.size() >= 2) {
        std::vector<double> radii;
        std::vector<double> spacings;
        for (const auto& f : rep.fragments) radii.push_back(f.rms_radius);
        for (std::size_t i = 0; i < rep.fragments.size(); ++i) {
            double d;
            nearest_neighbor(rep, g, i, d);
            spacings.push_back(d);
        }
        rep.median_radius = stats::median(radii);
        rep.median_spacing = stats::median(spacings);
        rep.mean_spacing = stats::mean(spacings);
    } else {
        rep.median_radius = rep.fragments.front().rms_radius;
        rep.warnings.push_back({"single_fragment", "spacing undefined with one fragment"});
    }
    return rep;
}

namespace {

double interpolate(const Field& f, const std::array<double, 3>& pos) {
    const Grid& g = f.grid;
    std::array<int, 3> base = {0, 0, 0};
    std::array<double, 3> frac = {0.0, 0.0, 0.0};
    for (int a = 0; a < g.dimension; ++a) {
        const double len = g.extent(a);
        // Inverse of Grid::position: fractional cell coordinate.
        double c = (pos[a] + 0.5 * len) / g.spacing - 0.5;
        if (g.periodic) {
            c -= g.shape[a] * std::floor(c / g.shape[a]);
        } else {
            c = std::clamp(c, 0.0, static_cast<double>(g.shape[a] - 1));
        }
        base[a] = static_cast<int>(std::floor(c));
        if (base[a] >= g.shape[a]) base[a] = g.shape[a] - 1;
        frac[a] = c - base[a];
    }
    double acc = 0.0;
    const int corners = 1 << g.dimension;
    for (int corner = 0; corner < corners; ++corner) {
        double w = 1.0;
        std::array<int, 3> cc = {0, 0, 0};
        for (int a = 0; a < g.dimension; ++a) {
            const int bit = (corner >> a) & 1;
            w *= bit ? frac[a] : 1.0 - frac[a];
            int idx = base[a] + bit;
            if (idx >= g.shape[a]) idx = g.periodic ? 0 : g.shape[a] - 1;
            cc[a] = idx;
        }
        acc += w * f[f.grid.index(cc[0], cc[1], cc[2])];
    }
    return acc;
}

} // namespace

double wkb_tunneling(const Field& potential, const std::array<double, 3>& from,
                     const std::array<double, 3>& to, double mu, double mass, double hbar,
                     double step) {
    potential.check_consistent();
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw NonPositiveInput("wkb_tunneling: mass and hbar must be > 0");
    const Grid& g = potential.grid;
    if (step <= 0.0) step = 0.5 * g.spacing;

    std::array<double, 3> delta = {0.0, 0.0, 0.0};
    double length2 = 0.0;
    for (int a = 0; a < g.dimension; ++a) {
        double d = to[a] - from[a];
        if (g.periodic) {
            const double len = g.extent(a);
            d -= len * std::round(d / len);
        }
        delta[a] = d;
        length2 += d * d;
    }
    const double length = std::sqrt(length2);
    if (length == 0.0) return 1.0;

    const int segments = std::max(1, static_cast<int>(std::ceil(length / step)));
    auto barrier = [&](double s) {
        std::array<double, 3> p = {0.0, 0.0, 0.0};
        for (int a = 0; a < g.dimension; ++a) p[a] = from[a] + s * delta[a];
        return std::sqrt(2.0 * mass * std::max(0.0, interpolate(potential, p) - mu));
    };
    double integral = 0.5 * (barrier(0.0) + barrier(1.0));
    for (int i = 1; i < segments; ++i)
        integral += barrier(static_cast<double>(i) / static_cast<double>(segments));
    integral *= length / static_cast<double>(segments);
    return std::exp(-integral / hbar);
}

void attach_tunneling(FragmentReport& report, const Field& potential, double mu, double mass,
                      double hbar) {
    potential.check_consistent();
    report.tunneling.clear();
    if (report.fragments.size() < 2) return;
    const Grid& g = potential.grid;
    for (std::size_t i = 0; i < report.fragments.size(); ++i) {
        double d;
        const std::size_t j = nearest_neighbor(report, g, i, d);
        PairTunneling link;
        link.from = report.fragments[i].id;
        link.to = report.fragments[j].id;
        link.amplitude = wkb_tunneling(potential, report.fragments[i].centroid,
                                       report.fragments[j].centroid, mu, mass, hbar);
        report.tunneling.push_back(link);
    }
}

ScalingReport fragmentation_scaling(const std::vector<double>& densities, double critical_density,
                                    int dimension,
                                    const std::vector<std::vector<FragmentReport>>& reports) {
    if (dimension < 1 || dimension > 3)
        throw InvalidDimension("fragmentation_scaling: dimension must be 1..3");
    if (!(critical_density > 0.0))
        throw NonPositiveInput("fragmentation_scaling: critical density must be > 0");
    if (reports.size() != densities.size())
        throw ShapeMismatch("fragmentation_scaling: reports do not match densities");
    for (std::size_t j = 0; j + 1 < densities.size(); ++j)
        if (!(densities[j] < densities[j + 1]))
            throw ValidationError("fragmentation_scaling: densities must be ascending");
    std::size_t deep = 0;
    for (double nd : densities) {
        if (!(nd > 0.0) || nd >= critical_density)
            throw DensityAboveCritical("fragmentation_scaling: densities must sit below critical");
        if (nd < critical_density / e_base) ++deep;
    }
    if (deep < 4)
        throw InsufficientSweep("fragmentation_scaling: need at least 4 densities below nc / e");

    ScalingReport out;
    out.densities = densities;
    std::vector<double> radius_x, radius_y;   // 1/u -> median radius, deep points only
    std::vector<double> ratio_x, ratio_y;     // (nc/n)^(1/d) -> spacing / radius

    for (std::size_t j = 0; j < densities.size(); ++j) {
        if (reports[j].size() < 20)
            throw InsufficientSweep("fragmentation_scaling: need at least 20 seeds per density");
        const double u = std::log(critical_density / densities[j]);
        const double x_ratio = std::pow(critical_density / densities[j], 1.0 / dimension);
        std::vector<double> counts, radii, spacings, ratios;
        for (const auto& rep : reports[j]) {
            counts.push_back(static_cast<double>(rep.fragments.size()));
            if (rep.fragments.empty()) continue;
            radii.push_back(rep.median_radius);
            if (u > 1.0 && rep.median_radius > 0.0) {
                radius_x.push_back(1.0 / u);
                radius_y.push_back(rep.median_radius);
            }
            if (rep.median_spacing > 0.0 && rep.median_radius > 0.0) {
                spacings.push_back(rep.median_spacing);
                ratios.push_back(rep.median_spacing / rep.median_radius);
                ratio_x.push_back(x_ratio);
                ratio_y.push_back(rep.median_spacing / rep.median_radius);
            }
        }
        out.median_count.push_back(counts.empty() ? 0.0 : stats::median(counts));
        out.median_radius.push_back(radii.empty() ? 0.0 : stats::median(radii));
        out.median_spacing.push_back(spacings.empty() ? 0.0 : stats::median(spacings));
        out.median_ratio.push_back(ratios.empty() ? 0.0 : stats::median(ratios));
    }

    out.count_nonincreasing = true;
    for (std::size_t j = 0; j + 1 < out.median_count.size(); ++j)
        if (out.median_count[j + 1] > out.median_count[j]) out.count_nonincreasing = false;
    out.ratio_monotone = true;
    for (std::size_t j = 0; j + 1 < out.median_ratio.size(); ++j)
        if (out.median_ratio[j] < out.median_ratio[j + 1]) out.ratio_monotone = false;

    if (radius_x.size() >= 3) {
        out.radius_fit = stats::linear_fit(radius_x, radius_y);
    } else {
        out.warnings.push_back({"sparse_radius_data", "not enough fragmented seeds for the radius fit"});
    }
    if (ratio_x.size() >= 3) {
        out.ratio_fit = stats::linear_fit(ratio_x, ratio_y);
    } else {
        out.warnings.push_back({"sparse_ratio_data", "not enough fragmented seeds for the ratio fit"});
    }
    return out;
}

} // namespace bosegas
