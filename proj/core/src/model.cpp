#include "rydres/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydres {

namespace {

bool finite(double x) { return std::isfinite(x); }

// Bisects F to a root inside [lo, hi]; requires a sign change.
double bisect(double lo, double hi, const ModelParams& p) {
    double flo = drift(lo, p);
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = drift(mid, p);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Newton polish on F; falls back to the input when the derivative is tiny
// (spinodal), throws after 100 non-converged steps.
double polish(double n, const ModelParams& p) {
    for (int i = 0; i < 100; ++i) {
        const double f = drift(n, p);
        if (std::abs(f) < 1e-13) return n;
        const double fp = drift_derivative(n, p);
        if (std::abs(fp) < 1e-14) return n;  // marginal root; bisection value stands
        double next = n - f / fp;
        next = std::clamp(next, 0.0, 0.5);
        if (next == n) return n;
        n = next;
    }
    if (std::abs(drift(n, p)) < 1e-11) return n;  // good enough near a spinodal
    throw std::runtime_error("stationary_states: Newton polish did not converge");
}

StationaryState classify(double n, const ModelParams& p) {
    StationaryState s;
    s.n_ss = n;
    const double fp = drift_derivative(n, p);
    s.stable = fp < 0.0;
    if (std::abs(fp) >= kSpinodalThreshold) s.tau_relax = 1.0 / std::abs(fp);
    return s;
}

}  // namespace

void ModelParams::validate() const {
    if (!(finite(omega) && finite(delta) && finite(gamma) && finite(gamma_d) &&
          finite(v) && finite(d)))
        throw std::invalid_argument("ModelParams: non-finite parameter");
    if (gamma <= 0.0) throw std::invalid_argument("ModelParams: gamma must be > 0");
    if (gamma_d < 0.0) throw std::invalid_argument("ModelParams: gamma_d must be >= 0");
    if (omega < 0.0) throw std::invalid_argument("ModelParams: omega must be >= 0");
    if (d < 0.0) throw std::invalid_argument("ModelParams: d must be >= 0");
}

std::complex<double> coherence_adiabatic(double n, const ModelParams& p) {
    p.validate();
    const std::complex<double> i(0.0, 1.0);
    return -i * p.omega * (n - 0.5) / (i * (p.delta - n * p.v) + p.big_gamma());
}

int StationarySet::stable_count() const {
    int c = 0;
    for (const auto& s : states) c += s.stable ? 1 : 0;
    return c;
}

const StationaryState& StationarySet::lowest_stable() const {
    for (const auto& s : states)
        if (s.stable) return s;
    throw std::runtime_error("StationarySet: no stable state");
}

const StationaryState& StationarySet::highest_stable() const {
    for (auto it = states.rbegin(); it != states.rend(); ++it)
        if (it->stable) return *it;
    throw std::runtime_error("StationarySet: no stable state");
}

StationarySet stationary_states(const ModelParams& p) {
    p.validate();
    StationarySet set;
    set.params = p;

    const double g2 = p.big_gamma();

    if (p.omega == 0.0) {
        // No drive: F(n) = -gamma n, single root at 0 is outside (0, 1/2);
        // the stationary density is the boundary fixed point n = 0.
        set.states.push_back(classify(0.0, p));
        return set;
    }

    if (p.v == 0.0) {
        // Linear case: single closed-form root.
        const double o2g = p.omega * p.omega * g2;
        const double n = 0.5 * o2g / (p.gamma * (g2 * g2 + p.delta * p.delta) + o2g);
        set.states.push_back(classify(polish(n, p), p));
        return set;
    }

    // Roots of F in (0, 1/2) coincide with roots of the cubic
    //   c3 n^3 + c2 n^2 + c1 n + c0
    // whose derivative is a quadratic with closed-form roots; F is strictly
    // monotone between consecutive critical points, so bracketing each
    // monotone interval finds every root.
    const double c3 = p.gamma * p.v * p.v;
    const double c2 = -2.0 * p.gamma * p.delta * p.v;
    const double c1 = p.gamma * (g2 * g2 + p.delta * p.delta) + p.omega * p.omega * g2;
    // c0 = -omega^2 Gamma / 2 (not needed explicitly)

    std::vector<double> nodes{0.0, 0.5};
    const double qa = 3.0 * c3, qb = 2.0 * c2, qc = c1;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        // Stable quadratic roots, avoiding cancellation.
        const double q = -0.5 * (qb + std::copysign(sq, qb));
        const double r1 = q / qa;
        const double r2 = qc / q;
        for (double r : {std::min(r1, r2), std::max(r1, r2)})
            if (r > 0.0 && r < 0.5) nodes.push_back(r);
    }
    std::sort(nodes.begin(), nodes.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double lo = nodes[i], hi = nodes[i + 1];
        const double flo = drift(lo, p), fhi = drift(hi, p);
        if (flo == 0.0 && lo > 0.0) {
            roots.push_back(lo);
            continue;
        }
        if ((flo > 0.0) != (fhi > 0.0)) roots.push_back(polish(bisect(lo, hi, p), p));
    }
    std::sort(roots.begin(), roots.end());

    // Merge near-coincident roots (spinodal collisions degrade 3 -> 1).
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() && r - merged.back() < kRootMergeTolerance)
            merged.back() = 0.5 * (merged.back() + r);
        else
            merged.push_back(r);
    }

    for (double r : merged) set.states.push_back(classify(r, p));
    return set;
}

std::optional<double> relaxation_time(double n_ss, const ModelParams& p) {
    p.validate();
    const double fp = drift_derivative(n_ss, p);
    if (std::abs(fp) < kSpinodalThreshold) return std::nullopt;
    return 1.0 / std::abs(fp);
}

PhaseDiagram phase_diagram(const std::vector<double>& delta_grid,
                           const std::vector<double>& omega_grid,
                           const ModelParams& p_base) {
    if (delta_grid.empty() || omega_grid.empty())
        throw std::invalid_argument("phase_diagram: empty grid");
    for (double x : delta_grid)
        if (!finite(x)) throw std::invalid_argument("phase_diagram: non-finite delta");
    for (double x : omega_grid)
        if (!finite(x)) throw std::invalid_argument("phase_diagram: non-finite omega");

    PhaseDiagram pd;
    pd.delta_grid = delta_grid;
    pd.omega_grid = omega_grid;
    pd.root_counts.resize(delta_grid.size() * omega_grid.size(), 0);
    pd.bistable_mask.resize(pd.root_counts.size(), false);

    for (std::size_t io = 0; io < omega_grid.size(); ++io) {
        for (std::size_t id = 0; id < delta_grid.size(); ++id) {
            ModelParams p = p_base;
            p.omega = omega_grid[io];
            p.delta = delta_grid[id];
            const std::size_t cell = io * delta_grid.size() + id;
            try {
                const auto set = stationary_states(p);
                pd.root_counts[cell] = static_cast<int>(set.states.size());
                pd.bistable_mask[cell] = set.states.size() == 3;
            } catch (const std::exception&) {
                pd.root_counts[cell] = -1;  // flagged cell, grid continues
            }
        }
    }
    return pd;
}

HysteresisBranch hysteresis_sweep(const ModelParams& p_base, double delta_from,
                                  double delta_to, int steps) {
    if (delta_from == delta_to)
        steps = 1;
    else if (steps < 2)
        throw std::invalid_argument("hysteresis_sweep: steps must be >= 2");

    HysteresisBranch branch;
    branch.direction = delta_to >= delta_from ? HysteresisBranch::Direction::up
                                              : HysteresisBranch::Direction::down;
    branch.points.reserve(static_cast<std::size_t>(steps));

    double prev_n = -1.0;  // sentinel: no branch yet
    for (int i = 0; i < steps; ++i) {
        const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
        const double delta = delta_from + t * (delta_to - delta_from);
        ModelParams p = p_base;
        p.delta = delta;

        SweepPoint pt;
        pt.delta = delta;
        try {
            const auto set = stationary_states(p);
            const StationaryState* best = nullptr;
            for (const auto& s : set.states) {
                if (!s.stable) continue;
                if (!best ||
                    (prev_n >= 0.0 &&
                     std::abs(s.n_ss - prev_n) < std::abs(best->n_ss - prev_n)))
                    best = &s;
            }
            if (!best) throw std::runtime_error("no stable stationary state");
            pt.n_ss = best->n_ss;
            prev_n = best->n_ss;
        } catch (const std::exception&) {
            pt.ok = false;
            pt.n_ss = std::numeric_limits<double>::quiet_NaN();
        }
        branch.points.push_back(pt);
    }
    return branch;
}

}  // namespace rydres
