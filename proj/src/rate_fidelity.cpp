#include "seminfo/rate_fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace seminfo {

namespace {

constexpr double output_floor = 1e-14;  // smallest representable output mass
constexpr double support_cut = 1e-12;   // membership threshold for the active set

void check_payoff_shape(const Distribution& source, const PayoffMatrix& payoff) {
    if (source.size() != payoff.events())
        throw_validation("source size must match the payoff row count");
}

// The solver works on the sub-problem restricted to positive-mass events;
// zero-mass rows are reinserted into the reported channel afterwards.
struct ReducedProblem {
    std::vector<std::size_t> events;  // indices of positive-mass events
    std::vector<double> p;            // their masses
    std::size_t messages = 0;
};

ReducedProblem reduce(const Distribution& source, const PayoffMatrix& payoff) {
    ReducedProblem r;
    r.messages = payoff.messages();
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (source[i] > 0.0) {
            r.events.push_back(i);
            r.p.push_back(source[i]);
        }
    }
    return r;
}

// Solve (A + ridge I) x = b for symmetric positive-definite A via Cholesky.
// Returns false when the factorization hits a non-positive pivot.
bool cholesky_solve(std::vector<double> a, std::size_t n, double ridge, std::vector<double> b,
                    std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += ridge;
    // In-place lower-triangular factorization.
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
        if (!(diag > 0.0)) return false;
        diag = std::sqrt(diag);
        a[j * n + j] = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / diag;
        }
    }
    // Forward then backward substitution.
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
        b[i] = v / a[i * n + i];
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= a[k * n + ii] * x[k];
        x[ii] = v / a[ii * n + ii];
    }
    return true;
}

// Internal solver state over the reduced problem.
struct Workspace {
    std::size_t n = 0;          // positive-mass events
    std::size_t m = 0;          // messages
    std::vector<double> p;      // source masses
    std::vector<double> w;      // w[i*m + j] = 2^(s * payoff_ij)
    std::vector<double> gains;  // payoff restricted to positive-mass rows

    std::vector<double> wq;     // (W q)_i
    std::vector<double> lambda; // 1 / (W q)_i
    std::vector<double> ratio;  // sum_i p_i lambda_i w_ij

    void refresh(const std::vector<double>& q) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = &w[i * m];
            for (std::size_t j = 0; j < m; ++j) acc += row[j] * q[j];
            wq[i] = acc;
            lambda[i] = 1.0 / acc;
        }
        std::fill(ratio.begin(), ratio.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double pl = p[i] * lambda[i];
            const double* row = &w[i * m];
            for (std::size_t j = 0; j < m; ++j) ratio[j] += pl * row[j];
        }
    }

    // KKT residual: the largest first-order violation. Off-support components
    // may only push the ratio above 1; supported components must sit at 1.
    double residual(const std::vector<double>& q) {
        refresh(q);
        double r = *std::max_element(ratio.begin(), ratio.end()) - 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (q[j] > support_cut) r = std::max(r, std::abs(ratio[j] - 1.0));
        }
        return r;
    }

    // Convex objective -sum_i p_i log2 (W q)_i; monotone descent of this is
    // the safeguard for over-relaxed multiplicative steps.
    double objective(const std::vector<double>& q) const {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = &w[i * m];
            for (std::size_t j = 0; j < m; ++j) acc += row[j] * q[j];
            f -= p[i] * std::log2(acc);
        }
        return f;
    }
};

void normalize(std::vector<double>& q) {
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& v : q) v /= sum;
}

// One multiplicative pass with safeguarded geometric over-relaxation. Returns
// the number of iterations spent; updates q and omega in place.
int multiplicative_phase(Workspace& ws, std::vector<double>& q, double& omega, int budget,
                         double kkt_tol, bool& hit_tol) {
    std::vector<double> base(ws.m), cand(ws.m);
    int used = 0;
    for (int it = 0; it < budget; ++it) {
        ++used;
        const double resid = ws.residual(q);
        if (resid <= kkt_tol) {
            hit_tol = true;
            return used;
        }
        for (std::size_t j = 0; j < ws.m; ++j)
            base[j] = std::max(q[j] * ws.ratio[j], output_floor);
        if (omega > 1.0) {
            for (std::size_t j = 0; j < ws.m; ++j)
                cand[j] = std::max(q[j] * std::pow(ws.ratio[j], omega), output_floor);
            normalize(cand);
            if (ws.objective(cand) <= ws.objective(base)) {
                q = cand;
                omega = std::min(omega * 1.6, 1e4);
            } else {
                q = base;
                omega = std::max(omega / 2.0, 1.0);
            }
        } else {
            q = base;
            omega *= 1.6;
        }
    }
    hit_tol = false;
    return used;
}

// Newton active-set finisher on the support of q. Solves the dual
// stationarity system restricted to the current support, dropping components
// that hit zero and re-admitting the worst off-support violator between
// rounds.
void newton_phase(Workspace& ws, std::vector<double>& q, double kkt_tol, int& newton_iters) {
    constexpr int inner_cap = 80;
    constexpr int outer_cap = 25;
    constexpr int stagnation_window = 8;
    constexpr double stagnation_factor = 0.9;
    constexpr double base_ridge = 3e-15;

    std::vector<char> support(ws.m, 0);
    bool any = false;
    for (std::size_t j = 0; j < ws.m; ++j) {
        if (q[j] > support_cut) {
            support[j] = 1;
            any = true;
        }
    }
    if (!any) {
        const std::size_t jmax =
            static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
        support[jmax] = 1;
    }

    double prev_resid = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < outer_cap; ++outer) {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < ws.m; ++j)
            if (support[j]) idx.push_back(j);
        std::size_t ms = idx.size();
        std::vector<double> qs(ms);
        for (std::size_t k = 0; k < ms; ++k) qs[k] = q[idx[k]];
        normalize(qs);

        std::vector<double> lam(ws.n), r(ms), a(ms * ms), delta(ms);
        double best_resid = std::numeric_limits<double>::infinity();
        int since_best = 0;
        for (int inner = 0; inner < inner_cap; ++inner) {
            ++newton_iters;
            for (std::size_t i = 0; i < ws.n; ++i) {
                double acc = 0.0;
                const double* row = &ws.w[i * ws.m];
                for (std::size_t k = 0; k < ms; ++k) acc += row[idx[k]] * qs[k];
                lam[i] = 1.0 / acc;
            }
            std::fill(r.begin(), r.end(), 0.0);
            for (std::size_t i = 0; i < ws.n; ++i) {
                const double pl = ws.p[i] * lam[i];
                const double* row = &ws.w[i * ws.m];
                for (std::size_t k = 0; k < ms; ++k) r[k] += pl * row[idx[k]];
            }
            double rmax = 0.0;
            for (std::size_t k = 0; k < ms; ++k) {
                r[k] -= 1.0;
                rmax = std::max(rmax, std::abs(r[k]));
            }
            if (rmax <= kkt_tol) break;
            if (rmax < stagnation_factor * best_resid) {
                best_resid = rmax;
                since_best = 0;
            } else if (++since_best >= stagnation_window) {
                break;
            }

            // A = W_S^T diag(p lambda^2) W_S.
            std::fill(a.begin(), a.end(), 0.0);
            for (std::size_t i = 0; i < ws.n; ++i) {
                const double scale = ws.p[i] * lam[i] * lam[i];
                const double* row = &ws.w[i * ws.m];
                for (std::size_t k = 0; k < ms; ++k) {
                    const double wk = row[idx[k]] * scale;
                    for (std::size_t l = k; l < ms; ++l) a[k * ms + l] += wk * row[idx[l]];
                }
            }
            for (std::size_t k = 0; k < ms; ++k)
                for (std::size_t l = 0; l < k; ++l) a[k * ms + l] = a[l * ms + k];

            double trace = 0.0;
            for (std::size_t k = 0; k < ms; ++k) trace += a[k * ms + k];
            double ridge = base_ridge * trace / static_cast<double>(ms);
            bool solved = false;
            for (int attempt = 0; attempt < 4; ++attempt) {
                if (cholesky_solve(a, ms, ridge, r, delta)) {
                    solved = true;
                    break;
                }
                ridge *= 100.0;
            }
            if (!solved) break;

            // Step clamp: stay strictly inside the positive orthant.
            double alpha = 1.0;
            for (std::size_t k = 0; k < ms; ++k) {
                if (delta[k] < 0.0) alpha = std::min(alpha, 0.95 * (-qs[k] / delta[k]));
            }
            for (std::size_t k = 0; k < ms; ++k) qs[k] = std::max(qs[k] + alpha * delta[k], 0.0);
            std::vector<char> dead(ms, 0);
            bool any_dead = false;
            for (std::size_t k = 0; k < ms; ++k) {
                if (qs[k] <= 0.0) {
                    dead[k] = 1;
                    any_dead = true;
                }
            }
            normalize(qs);
            if (any_dead) {
                std::vector<std::size_t> keep;
                std::vector<double> qs2;
                for (std::size_t k = 0; k < ms; ++k) {
                    if (dead[k]) {
                        support[idx[k]] = 0;
                    } else {
                        keep.push_back(idx[k]);
                        qs2.push_back(qs[k]);
                    }
                }
                idx = std::move(keep);
                ms = idx.size();
                qs = std::move(qs2);
                normalize(qs);
                r.resize(ms);
                a.resize(ms * ms);
                delta.resize(ms);
                best_resid = std::numeric_limits<double>::infinity();
                since_best = 0;
            }
        }

        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t k = 0; k < ms; ++k) q[idx[k]] = qs[k];
        for (double& v : q) v = std::max(v, output_floor);
        normalize(q);

        const double resid = ws.residual(q);
        if (resid <= kkt_tol) return;
        // Re-admit the worst off-support violator, if any.
        std::size_t jadd = ws.m;
        double worst = 1.0 + std::max(kkt_tol, 1e-12);
        for (std::size_t j = 0; j < ws.m; ++j) {
            if (!support[j] && ws.ratio[j] > worst) {
                worst = ws.ratio[j];
                jadd = j;
            }
        }
        if (jadd < ws.m) {
            support[jadd] = 1;
            q[jadd] = 1e-8;
            normalize(q);
        } else if (resid > 0.7 * prev_resid) {
            return;  // no violators and stalled progress
        }
        prev_resid = resid;
    }
}

struct InternalSolution {
    std::vector<double> q;  // internal output weights (floored, normalized)
    double rate = 0.0;
    double fidelity = 0.0;
    std::vector<double> lambda;  // over positive-mass events
    int iterations = 0;
    bool converged = false;
};

InternalSolution solve_reduced(const ReducedProblem& red, const Matrix& payoff, double s,
                               const SolveOptions& options) {
    if (!(options.tolerance > 0.0)) throw_validation("solver tolerance must be positive");
    if (options.max_iterations < 1) throw_validation("iteration budget must be at least 1");

    Workspace ws;
    ws.n = red.events.size();
    ws.m = red.messages;
    ws.p = red.p;
    ws.w.resize(ws.n * ws.m);
    ws.gains.resize(ws.n * ws.m);
    for (std::size_t k = 0; k < ws.n; ++k) {
        for (std::size_t j = 0; j < ws.m; ++j) {
            const double g = payoff(red.events[k], j);
            ws.gains[k * ws.m + j] = g;
            const double weight = std::exp2(s * g);
            if (!std::isfinite(weight))
                throw_validation("invalid slope: payoff weights overflow at this slope");
            ws.w[k * ws.m + j] = weight;
        }
    }
    for (std::size_t k = 0; k < ws.n; ++k) {
        double row_max = 0.0;
        for (std::size_t j = 0; j < ws.m; ++j)
            row_max = std::max(row_max, ws.w[k * ws.m + j]);
        if (!(row_max > 0.0))
            throw_validation("invalid slope: payoff weights underflow at this slope");
    }
    ws.wq.resize(ws.n);
    ws.lambda.resize(ws.n);
    ws.ratio.resize(ws.m);

    std::vector<double> q;
    if (options.warm_start) {
        if (options.warm_start->size() != ws.m)
            throw_validation("warm start must have one weight per message");
        q = *options.warm_start;
        for (double v : q) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw_validation("invalid weight: warm start weights must be nonnegative");
        }
        for (double& v : q) v = std::max(v, output_floor);
        normalize(q);
    } else {
        q.assign(ws.m, 1.0 / static_cast<double>(ws.m));
    }

    const double kkt_tol = std::max(options.tolerance, 1e-13);
    const double flag_tol = std::max(options.tolerance, 1e-9);
    InternalSolution sol;

    // Phase 1: safeguarded over-relaxed multiplicative updates.
    double omega = 1.0;
    bool hit = false;
    const int phase1_cap = std::min(options.max_iterations, 1500);
    sol.iterations += multiplicative_phase(ws, q, omega, phase1_cap, kkt_tol, hit);

    if (!hit) {
        // Phase 2: Newton active-set finisher.
        newton_phase(ws, q, kkt_tol, sol.iterations);
        // Phase 3: multiplicative tail with any remaining budget, for cases
        // where curvature is too flat for Newton to certify the residual.
        if (ws.residual(q) > flag_tol) {
            const int budget = options.max_iterations - 1500;
            if (budget > 0) {
                omega = 4.0;
                sol.iterations += multiplicative_phase(ws, q, omega, budget, kkt_tol, hit);
            }
        }
    }

    for (double& v : q) v = std::max(v, output_floor);
    normalize(q);
    const double resid = ws.residual(q);
    sol.converged = resid <= flag_tol;
    sol.q = q;
    sol.lambda.assign(ws.lambda.begin(), ws.lambda.end());

    double fidelity = 0.0;
    double dual = 0.0;
    for (std::size_t k = 0; k < ws.n; ++k) {
        const double* row = &ws.w[k * ws.m];
        const double* gain = &ws.gains[k * ws.m];
        double acc = 0.0;
        for (std::size_t j = 0; j < ws.m; ++j) acc += q[j] * row[j] * gain[j];
        fidelity += ws.p[k] * ws.lambda[k] * acc;
        dual += ws.p[k] * std::log2(ws.lambda[k]);
    }
    sol.fidelity = fidelity;
    sol.rate = std::max(s * fidelity + dual, 0.0);
    return sol;
}

RateFidelityPoint assemble_point(const Distribution& source, const PayoffMatrix& payoff,
                                 double s, const ReducedProblem& red,
                                 const InternalSolution& sol) {
    const std::size_t n = source.size();
    const std::size_t m = payoff.messages();
    RateFidelityPoint pt;
    pt.s = s;
    pt.rate = sol.rate;
    pt.fidelity = sol.fidelity;
    pt.iterations = sol.iterations;
    pt.converged = sol.converged;
    pt.channel = Matrix(n, m, 0.0);
    pt.multipliers.assign(n, 0.0);
    for (std::size_t k = 0; k < red.events.size(); ++k) {
        const std::size_t i = red.events[k];
        pt.multipliers[i] = sol.lambda[k];
        for (std::size_t j = 0; j < m; ++j)
            pt.channel(i, j) = sol.q[j] * std::exp2(s * payoff.values(i, j)) * sol.lambda[k];
    }
    // Multipliers remain defined for zero-mass events.
    for (std::size_t i = 0; i < n; ++i) {
        if (source[i] > 0.0) continue;
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += sol.q[j] * std::exp2(s * payoff.values(i, j));
        pt.multipliers[i] = 1.0 / acc;
    }
    pt.output.assign(m, 0.0);
    for (std::size_t k = 0; k < red.events.size(); ++k) {
        const std::size_t i = red.events[k];
        for (std::size_t j = 0; j < m; ++j) pt.output[j] += source[i] * pt.channel(i, j);
    }
    for (double& v : pt.output) {
        if (v < output_floor) v = 0.0;
    }
    return pt;
}

RateFidelityPoint analytic_zero_slope(const Distribution& source, const PayoffMatrix& payoff,
                                      const ReducedProblem& red) {
    const std::size_t m = payoff.messages();
    std::size_t best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < red.events.size(); ++k)
            g += red.p[k] * payoff.values(red.events[k], j);
        if (g > best_gain) {  // strict: lowest index wins ties
            best_gain = g;
            best = j;
        }
    }
    RateFidelityPoint pt;
    pt.s = 0.0;
    pt.rate = 0.0;
    pt.fidelity = best_gain;
    pt.channel = Matrix(source.size(), m, 0.0);
    for (std::size_t k = 0; k < red.events.size(); ++k) pt.channel(red.events[k], best) = 1.0;
    pt.output.assign(m, 0.0);
    pt.output[best] = 1.0;
    pt.multipliers.assign(source.size(), 1.0);
    pt.iterations = 0;
    pt.converged = true;
    return pt;
}

// Shared solve with warm-start plumbing that also returns the internal q for
// chaining.
RateFidelityPoint solve_with_state(const Distribution& source, const PayoffMatrix& payoff,
                                   double s, const SolveOptions& options,
                                   std::vector<double>* internal_q) {
    check_payoff_shape(source, payoff);
    if (!(s >= 0.0)) throw_validation("invalid slope: slope must be nonnegative");
    const ReducedProblem red = reduce(source, payoff);
    if (s == 0.0) {
        RateFidelityPoint pt = analytic_zero_slope(source, payoff, red);
        if (internal_q) *internal_q = pt.output;
        return pt;
    }
    const InternalSolution sol = solve_reduced(red, payoff.values, s, options);
    if (internal_q) *internal_q = sol.q;
    return assemble_point(source, payoff, s, red, sol);
}

}  // namespace

PayoffMatrix::PayoffMatrix(Matrix values_in) : values(std::move(values_in)) {
    if (values.rows() == 0 || values.cols() == 0)
        throw_validation("payoff matrix must be non-empty");
    for (double v : values.data()) {
        if (!std::isfinite(v)) throw_validation("payoff entries must be finite");
    }
}

DistortionMatrix::DistortionMatrix(Matrix values_in) : values(std::move(values_in)) {
    if (values.rows() == 0 || values.cols() == 0)
        throw_validation("distortion matrix must be non-empty");
    for (double v : values.data()) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw_validation("distortion entries must be nonnegative and finite");
    }
}

PayoffMatrix payoff_from_semantics(const Distribution& prior, const SemanticChannel& semantics,
                                   double degree_floor) {
    if (semantics.event_count() != prior.size())
        throw_validation("semantic channel and prior must share one alphabet");
    const std::size_t n = prior.size();
    const std::size_t m = semantics.message_count();
    Matrix payoff(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        const TruthFunction& truth = semantics.message(j);
        double q = 0.0;
        std::vector<double> clamped(n);
        for (std::size_t i = 0; i < n; ++i) {
            clamped[i] = clamp_degree(truth[i], degree_floor);
            q += prior[i] * clamped[i];
        }
        for (std::size_t i = 0; i < n; ++i) payoff(i, j) = std::log2(clamped[i] / q);
    }
    return PayoffMatrix(std::move(payoff));
}

double average_distortion(const Distribution& source, const Channel& channel,
                          const DistortionMatrix& distortion) {
    if (channel.input_count() != source.size())
        throw_validation("source size must match the channel's input count");
    if (distortion.values.rows() != source.size() ||
        distortion.values.cols() != channel.output_count())
        throw_validation("distortion matrix shape must match source and channel");
    double d = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i)
        for (std::size_t j = 0; j < channel.output_count(); ++j)
            d += source[i] * channel(i, j) * distortion.values(i, j);
    return d;
}

RateFidelityPoint solve_rate_fidelity_point(const Distribution& source,
                                            const PayoffMatrix& payoff, double s,
                                            const SolveOptions& options) {
    return solve_with_state(source, payoff, s, options, nullptr);
}

std::vector<RateFidelityPoint> sweep_rate_fidelity(const Distribution& source,
                                                   const PayoffMatrix& payoff,
                                                   const std::vector<double>& s_grid,
                                                   const SolveOptions& options) {
    if (s_grid.empty()) throw_validation("slope grid must be non-empty");
    for (std::size_t i = 0; i + 1 < s_grid.size(); ++i) {
        if (!(s_grid[i] < s_grid[i + 1]))
            throw_validation("slope grid must be strictly increasing");
    }
    std::vector<RateFidelityPoint> curve;
    curve.reserve(s_grid.size());
    SolveOptions opts = options;
    std::vector<double> chain;
    for (double s : s_grid) {
        curve.push_back(solve_with_state(source, payoff, s, opts, &chain));
        opts.warm_start = chain;
    }
    return curve;
}

std::vector<RateDistortionPoint> sweep_rate_distortion(const Distribution& source,
                                                       const DistortionMatrix& distortion,
                                                       const std::vector<double>& s_grid,
                                                       const SolveOptions& options) {
    Matrix negated(distortion.values.rows(), distortion.values.cols());
    for (std::size_t i = 0; i < negated.rows(); ++i)
        for (std::size_t j = 0; j < negated.cols(); ++j) negated(i, j) = -distortion.values(i, j);
    const PayoffMatrix payoff(std::move(negated));
    std::vector<RateFidelityPoint> curve = sweep_rate_fidelity(source, payoff, s_grid, options);
    std::vector<RateDistortionPoint> result;
    result.reserve(curve.size());
    for (RateFidelityPoint& pt : curve) {
        RateDistortionPoint rd;
        rd.s = pt.s;
        rd.rate = pt.rate;
        rd.distortion = -pt.fidelity;
        rd.channel = std::move(pt.channel);
        rd.output = std::move(pt.output);
        rd.iterations = pt.iterations;
        rd.converged = pt.converged;
        result.push_back(std::move(rd));
    }
    return result;
}

MatchingPoint find_matching_point(const Distribution& source, const PayoffMatrix& payoff,
                                  const std::vector<RateFidelityPoint>& curve,
                                  const MatchingOptions& options) {
    check_payoff_shape(source, payoff);
    if (curve.size() < 2) throw_validation("matching requires a curve with at least two points");
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        if (!(curve[i].s < curve[i + 1].s))
            throw_validation("curve points must have strictly increasing slopes");
    }

    const auto gap = [](const RateFidelityPoint& pt) { return std::abs(pt.rate - pt.fidelity); };
    std::size_t idx = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (gap(curve[i]) < gap(curve[idx])) idx = i;
    }
    if (idx == 0 || idx + 1 == curve.size()) {
        if (gap(curve[idx]) <= 1e-9) return MatchingPoint{curve[idx].s, curve[idx]};
        throw_validation("matching point outside sweep: extend the slope grid");
    }

    SolveOptions solve_opts = options.solve;
    solve_opts.warm_start = curve[idx].output;
    std::map<double, RateFidelityPoint> cache;
    const auto solve = [&](double s) -> const RateFidelityPoint& {
        auto it = cache.find(s);
        if (it == cache.end())
            it = cache.emplace(s, solve_rate_fidelity_point(source, payoff, s, solve_opts)).first;
        return it->second;
    };

    double a = curve[idx - 1].s;
    double b = curve[idx + 1].s;
    RateFidelityPoint pa = solve(a);
    RateFidelityPoint pb = solve(b);
    RateFidelityPoint best = pa;
    if (gap(pb) < gap(best)) best = pb;
    if (gap(curve[idx]) < gap(best)) best = curve[idx];

    // The chord slope dR/dG between two curve points brackets the parameter s
    // of every point between them, so comparing chord slopes against 1 tells
    // which side of the matching point an interval lies on.
    while (b - a > options.slope_tolerance) {
        const double mid = 0.5 * (a + b);
        const RateFidelityPoint pm = solve(mid);
        if (gap(pm) < gap(best)) best = pm;
        const double dgl = pm.fidelity - pa.fidelity;
        const double drl = pm.rate - pa.rate;
        const double dgr = pb.fidelity - pm.fidelity;
        const double drr = pb.rate - pm.rate;
        const bool left_flat = std::abs(dgl) < 1e-15;
        const bool right_flat = std::abs(dgr) < 1e-15;
        if (left_flat && right_flat) break;
        const double slope_left = left_flat ? 0.0 : drl / dgl;
        const double slope_right = right_flat ? 0.0 : drr / dgr;
        if (!left_flat && slope_left >= 1.0) {
            b = mid;
            pb = pm;
        } else if (!right_flat && slope_right <= 1.0) {
            a = mid;
            pa = pm;
        } else {
            // Both chord slopes straddle 1: the matching parameter lies inside
            // [slope_left, slope_right]; intersect with the current interval.
            const double na = left_flat ? a : std::max(a, slope_left);
            const double nb = right_flat ? b : std::min(b, slope_right);
            if (!(na < nb)) break;
            if (!(na > a) && !(nb < b)) break;  // interval cannot tighten further
            if (na > a) {
                a = na;
                pa = solve(a);
                if (gap(pa) < gap(best)) best = pa;
            }
            if (nb < b) {
                b = nb;
                pb = solve(b);
                if (gap(pb) < gap(best)) best = pb;
            }
        }
    }
    const RateFidelityPoint pm = solve(0.5 * (a + b));
    if (gap(pm) < gap(best)) best = pm;
    return MatchingPoint{best.s, best};
}

double brute_force_rate_at_fidelity(const Distribution& source, const PayoffMatrix& payoff,
                                    double g_target, int resolution) {
    check_payoff_shape(source, payoff);
    if (resolution < 1) throw_validation("resolution must be at least 1");
    const std::size_t n = source.size();
    const std::size_t m = payoff.messages();

    // Rows on the simplex grid: compositions of `resolution` into m parts.
    std::vector<std::vector<double>> rows;
    std::vector<int> comp(m, 0);
    comp[0] = resolution;
    const auto push_row = [&]() {
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j)
            row[j] = static_cast<double>(comp[j]) / static_cast<double>(resolution);
        rows.push_back(std::move(row));
    };
    // Enumerate compositions in lexicographic order.
    while (true) {
        push_row();
        // Find rightmost position (except last) with a positive entry.
        std::size_t k = m - 1;
        while (k > 0 && comp[k - 1] == 0) --k;
        if (k == 0) break;
        --comp[k - 1];
        int rest = 1;
        for (std::size_t j = k; j < m; ++j) {
            rest += comp[j];
            comp[j] = 0;
        }
        comp[k] = rest;
    }

    double combos = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        combos *= static_cast<double>(rows.size());
        if (combos > 2e8)
            throw_validation("brute-force instance too large at this resolution");
    }

    std::vector<std::size_t> choice(n, 0);
    double best_rate = std::numeric_limits<double>::infinity();
    std::vector<double> out(m);
    bool feasible = false;
    while (true) {
        double g = 0.0;
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& row = rows[choice[i]];
            for (std::size_t j = 0; j < m; ++j) {
                g += source[i] * row[j] * payoff.values(i, j);
                out[j] += source[i] * row[j];
            }
        }
        if (g >= g_target - 1e-12) {
            feasible = true;
            double mi = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (source[i] == 0.0) continue;
                const std::vector<double>& row = rows[choice[i]];
                for (std::size_t j = 0; j < m; ++j) {
                    if (row[j] > 0.0) mi += source[i] * row[j] * std::log2(row[j] / out[j]);
                }
            }
            best_rate = std::min(best_rate, mi);
        }
        // Odometer step over row choices.
        std::size_t pos = 0;
        while (pos < n && ++choice[pos] == rows.size()) {
            choice[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    if (!feasible)
        throw_validation("infeasible fidelity target: no channel on the grid reaches it");
    return best_rate < 0.0 ? 0.0 : best_rate;
}

}  // namespace seminfo
