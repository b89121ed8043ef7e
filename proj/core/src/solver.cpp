#include "gwext/solver.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gwext {

void SolveConfig::validate() const {
    if (!(inner_tol > 0.0) || !(trunc_tol > 0.0))
        throw std::invalid_argument("SolveConfig: tolerances must be positive");
    if (window_schedule.empty())
        throw std::invalid_argument("SolveConfig: empty window schedule");
    for (std::size_t i = 1; i < window_schedule.size(); ++i)
        if (window_schedule[i] <= window_schedule[i - 1])
            throw std::invalid_argument(
                "SolveConfig: window schedule must be strictly increasing");
    if (max_inner_iters == 0)
        throw std::invalid_argument("SolveConfig: max_inner_iters must be >= 1");
    if (reporting_window == 0)
        throw std::invalid_argument("SolveConfig: reporting window must be >= 1");
}

SolveConfig parse_solve_config(const std::string& text) {
    SolveConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got: " + line);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string()
                                          : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "inner_tol") {
            cfg.inner_tol = std::stod(value);
        } else if (key == "trunc_tol") {
            cfg.trunc_tol = std::stod(value);
        } else if (key == "max_inner_iters") {
            cfg.max_inner_iters = std::stoull(value);
        } else if (key == "reporting_window") {
            cfg.reporting_window = std::stoull(value);
        } else if (key == "joint_schedule") {
            cfg.joint_schedule = (value == "true" || value == "1" || value == "yes");
        } else if (key == "window_schedule") {
            cfg.window_schedule.clear();
            std::istringstream vs(value);
            std::string tok;
            while (std::getline(vs, tok, ','))
                cfg.window_schedule.push_back(std::stoull(trim(tok)));
        } else {
            throw std::invalid_argument("config: unknown key: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

SolveConfig load_solve_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_solve_config(buf.str());
}

namespace detail {

WindowSystem::WindowSystem(const ProcessSpec& spec, const Window& window,
                           const std::function<CoordKind(TypeId)>& mode,
                           const std::function<double(TypeId)>& boundary)
    : window_(window) {
    coords_.resize(window.size);
    for (std::uint64_t i = 0; i < window.size; ++i) {
        Coord& coord = coords_[i];
        coord.kind = mode(TypeId{i});
        if (coord.kind != CoordKind::live) continue;
        const OffspringLaw law = spec.law(TypeId{i});
        if (law.is_joint()) {
            coord.joint = true;
            for (const auto& o : law.joint().outcomes) {
                if (o.prob == 0.0) continue;
                Term term;
                term.coeff = o.prob;
                bool dead = false;
                for (const auto& [child, count] : o.children) {
                    if (count == 0) continue;
                    if (window.contains(child)) {
                        term.powers.push_back(
                            {static_cast<std::uint32_t>(child.index), count});
                    } else {
                        double v = boundary(child);
                        if (v == 0.0) {
                            dead = true;
                            break;
                        }
                        term.const_log += count * std::log(v);
                    }
                }
                if (dead) {
                    coord.const_deficit += term.coeff;
                } else if (!term.powers.empty() || term.const_log != 0.0) {
                    coord.terms.push_back(std::move(term));
                }
            }
        } else {
            coord.joint = false;
            for (const auto& c : law.product().components) {
                if (window.contains(c.child)) {
                    Comp comp;
                    comp.slot = static_cast<std::uint32_t>(c.child.index);
                    comp.law = c.law;
                    comp.p = c.p;
                    comp.n = c.n;
                    comp.mean = c.mean;
                    comp.pmf = c.pmf;
                    coord.comps.push_back(std::move(comp));
                } else {
                    double factor = c.pgf(boundary(c.child));
                    if (factor == 0.0) {
                        coord.constant_one_deficit = true;
                        coord.comps.clear();
                        coord.const_log = 0.0;
                        break;
                    }
                    coord.const_log += std::log(factor);
                }
            }
        }
    }
}

double WindowSystem::eval_coord(const Coord& c, const std::vector<double>& u) const {
    if (c.constant_one_deficit) return 1.0;
    if (c.joint) {
        // Deficit = sum over outcomes of p_o * (1 - prod s_child^count).
        double acc = c.const_deficit;
        for (const auto& term : c.terms) {
            double logprod = term.const_log;
            for (const auto& [slot, count] : term.powers)
                logprod += count * std::log1p(-u[slot]);
            acc += term.coeff * (-std::expm1(logprod));
        }
        return acc > 1.0 ? 1.0 : acc;
    }
    double logprod = c.const_log;
    for (const auto& comp : c.comps) {
        double v = u[comp.slot];
        switch (comp.law) {
            case CountComponent::Law::bernoulli:
                logprod += std::log1p(-comp.p * v);
                break;
            case CountComponent::Law::deterministic:
                logprod += comp.n * std::log1p(-v);
                break;
            case CountComponent::Law::geometric: {
                double mu = comp.mean * v;
                if (std::isinf(comp.mean))
                    logprod += v > 0.0
                                   ? -std::numeric_limits<double>::infinity()
                                   : 0.0;
                else
                    logprod += -std::log1p(mu);
                break;
            }
            case CountComponent::Law::explicit_finite: {
                double d = 0.0;
                double lg = std::log1p(-v);
                for (const auto& [count, prob] : comp.pmf)
                    if (count > 0) d += prob * (-std::expm1(count * lg));
                logprod += std::log1p(-d);
                break;
            }
        }
        if (logprod == -std::numeric_limits<double>::infinity()) break;
    }
    return -std::expm1(logprod);
}

std::vector<double> WindowSystem::initial(double live_value) const {
    std::vector<double> u(window_.size, 1.0 - live_value);
    for (std::uint64_t i = 0; i < window_.size; ++i) {
        if (coords_[i].kind == CoordKind::pinned_zero) u[i] = 1.0;
        if (coords_[i].kind == CoordKind::pinned_one) u[i] = 0.0;
    }
    return u;
}

double WindowSystem::sweep(const std::vector<double>& in,
                           std::vector<double>& out) const {
    double delta = 0.0;
    for (std::uint64_t i = 0; i < window_.size; ++i) {
        const Coord& c = coords_[i];
        if (c.kind != CoordKind::live) {
            out[i] = in[i];
            continue;
        }
        double v = eval_coord(c, in);
        double d = v - in[i];
        if (d < 0) d = -d;
        if (d > delta) delta = d;
        out[i] = v;
    }
    return delta;
}

FixedPointRun WindowSystem::iterate(double live_value, double inner_tol,
                                    std::uint64_t max_iters) const {
    return iterate_from(initial(live_value), inner_tol, max_iters);
}

FixedPointRun WindowSystem::iterate_from(std::vector<double> start,
                                         double inner_tol,
                                         std::uint64_t max_iters) const {
    std::vector<double> cur = std::move(start);
    std::vector<double> next(cur.size());
    FixedPointRun run;
    const std::uint64_t quiet_required = window_.size + 8;
    std::uint64_t quiet = 0;
    for (std::uint64_t it = 0; it < max_iters; ++it) {
        double delta = sweep(cur, next);
        cur.swap(next);
        ++run.iterations;
        if (delta == 0.0) {
            run.converged = true;
            break;
        }
        if (delta <= inner_tol) {
            if (++quiet >= quiet_required) {
                run.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    // The step delta equals the residual of the previous iterate; verify the
    // final iterate directly.
    run.residual = sweep(cur, next);
    if (run.residual > inner_tol) run.converged = false;
    std::vector<double> probs(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
        double s = 1.0 - cur[i];
        probs[i] = s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
    }
    run.vector = ProbVector(window_, std::move(probs));
    run.deficits = std::move(cur);
    return run;
}

}  // namespace detail

namespace {

using detail::CoordKind;
using detail::WindowSystem;

double sup_diff_deficits(const std::vector<double>& a,
                         const std::vector<double>& b, std::uint64_t prefix) {
    std::uint64_t n = std::min<std::uint64_t>({prefix, a.size(), b.size()});
    double d = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        double g = a[i] - b[i];
        if (g < 0) g = -g;
        if (g > d) d = g;
    }
    return d;
}

struct SideLabels {
    std::vector<std::uint64_t> label;  // per window index, label within its side
    std::vector<bool> in_target;
    std::uint64_t target_count = 0;
    std::uint64_t complement_count = 0;
};

SideLabels side_labels(const SubsetSpec& A, const Window& window) {
    SideLabels out;
    out.label.resize(window.size);
    out.in_target.resize(window.size);
    for (std::uint64_t i = 0; i < window.size; ++i) {
        bool in = A.contains(TypeId{i});
        out.in_target[i] = in;
        out.label[i] = in ? out.target_count++ : out.complement_count++;
    }
    return out;
}

FixedPointRun run_modified(const ProcessSpec& spec, const SubsetSpec& A,
                           std::uint64_t k, std::uint64_t lprime,
                           const Window& window, const SolveConfig& cfg) {
    SideLabels labels = side_labels(A, window);
    auto mode = [&](TypeId t) {
        if (labels.in_target[t.index])
            return labels.label[t.index] < k ? CoordKind::live
                                             : CoordKind::pinned_zero;
        return labels.label[t.index] < lprime ? CoordKind::live
                                              : CoordKind::pinned_one;
    };
    auto boundary = [&](TypeId t) { return A.contains(t) ? 0.0 : 1.0; };
    WindowSystem sys(spec, window, mode, boundary);
    return sys.iterate(0.0, cfg.inner_tol, cfg.max_inner_iters);
}

bool subset_empty_on(const SubsetSpec& A, std::uint64_t scan) {
    for (std::uint64_t i = 0; i < scan; ++i)
        if (A.contains(TypeId{i})) return false;
    return true;
}

// Exact route for typesets that fit in a window: the maximal fixed point of
// the zeroed map, then forward iteration of the plain generating map, which
// increases to q(A). Correct with no irreducibility assumption.
ExtinctionResult solve_q_exact_finite(const ProcessSpec& spec, const SubsetSpec& A,
                                      const SolveConfig& cfg) {
    Window window{spec.type_count()};
    auto zero_mode = [&](TypeId t) {
        return A.contains(t) ? CoordKind::pinned_zero : CoordKind::live;
    };
    auto boundary = [](TypeId) { return 1.0; };  // unused: window is total
    WindowSystem zeroed(spec, window, zero_mode, boundary);
    FixedPointRun stage1 = zeroed.iterate(1.0, cfg.inner_tol, cfg.max_inner_iters);

    auto live_mode = [](TypeId) { return CoordKind::live; };
    WindowSystem plain(spec, window, live_mode, boundary);
    FixedPointRun stage2 = plain.iterate_from(stage1.deficits, cfg.inner_tol,
                                              cfg.max_inner_iters);

    ExtinctionResult result;
    result.residual = stage2.residual;
    result.iterations_used = stage1.iterations + stage2.iterations;
    result.windows_used = {window.size};
    result.converged = stage1.converged && stage2.converged;
    result.method = "exact-finite";
    TruncationStep step;
    step.window = window.size;
    step.live_target = window.size;
    step.live_complement = window.size;
    step.sup_delta = 0.0;
    step.iterations = result.iterations_used;
    step.residual = stage2.residual;
    result.monotonicity_log.push_back(step);
    result.vector = std::move(stage2.vector);
    result.deficits = std::move(stage2.deficits);
    return result;
}

// General route for target sets that are finite inside every window: the
// double truncation degenerates there (no immortal types remain), so
// compute the never-visit fixed point and iterate the plain map forward,
// growing the window until the reporting prefix stabilizes. Valid with no
// irreducibility assumption; the increasing forward iterates converge to
// the extinction vector.
ExtinctionResult solve_q_never_visit_forward(const ProcessSpec& spec,
                                             const SubsetSpec& A,
                                             const SolveConfig& cfg) {
    ExtinctionResult result;
    result.method = "never-visit-forward";
    std::optional<std::vector<double>> prev;
    std::uint64_t quiet_steps = 0;
    bool stabilized = false;
    for (std::uint64_t n : cfg.window_schedule) {
        Window window = spec.clamp(Window{n});
        auto zero_mode = [&](TypeId t) {
            return A.contains(t) ? CoordKind::pinned_zero : CoordKind::live;
        };
        auto boundary = [](TypeId) { return 1.0; };
        WindowSystem zeroed(spec, window, zero_mode, boundary);
        FixedPointRun stage1 =
            zeroed.iterate(1.0, cfg.inner_tol, cfg.max_inner_iters);
        auto live_mode = [](TypeId) { return CoordKind::live; };
        WindowSystem plain(spec, window, live_mode, boundary);
        FixedPointRun stage2 = plain.iterate_from(
            std::move(stage1.deficits), cfg.inner_tol, cfg.max_inner_iters);

        SideLabels labels = side_labels(A, window);
        TruncationStep step;
        step.window = window.size;
        step.live_target = labels.target_count;
        step.live_complement = labels.complement_count;
        step.iterations = stage1.iterations + stage2.iterations;
        step.residual = stage2.residual;
        step.sup_delta = prev ? sup_diff_deficits(stage2.deficits, *prev,
                                                  cfg.reporting_window)
                              : 1.0;
        result.monotonicity_log.push_back(step);
        result.windows_used.push_back(window.size);
        result.iterations_used += step.iterations;
        result.residual = stage2.residual;
        bool inner_ok = stage1.converged && stage2.converged;
        prev = stage2.deficits;
        result.vector = std::move(stage2.vector);
        result.deficits = std::move(stage2.deficits);
        if (window.size == spec.type_count()) {
            stabilized = inner_ok;
            break;
        }
        if (!inner_ok) {
            quiet_steps = 0;
            continue;
        }
        if (result.monotonicity_log.size() >= 2 &&
            step.sup_delta <= cfg.trunc_tol) {
            if (++quiet_steps >= 2) {
                stabilized = true;
                break;
            }
        } else {
            quiet_steps = 0;
        }
    }
    result.converged = stabilized && result.residual <= cfg.inner_tol;
    return result;
}

// Advisory check behind the truncation guarantee: the half-window types
// must form a single irreducible class of the windowed type graph. Types
// near the window edge lose their outgoing edges to truncation, so the
// plain windowed class count would flag processes that are irreducible.
bool bulk_irreducible(const ProcessSpec& spec, const Window& window) {
    if (window.size == 0) return false;
    if (spec.finite() && window.size >= spec.type_count())
        return is_irreducible_on(spec, spec.clamp(window));
    auto classes = irreducible_classes(spec, window);
    std::uint64_t bulk = std::max<std::uint64_t>(window.size / 2, 1);
    const std::vector<std::uint32_t>* home = nullptr;
    for (const auto& cls : classes)
        for (auto v : cls)
            if (v == 0) home = &cls;
    if (home == nullptr) return false;
    std::vector<bool> in_home(window.size, false);
    for (auto v : *home) in_home[v] = true;
    for (std::uint64_t i = 0; i < bulk; ++i)
        if (!in_home[i]) return false;
    return true;
}

// A target set is window-finite when its membership stops growing between
// the half and full scan of the largest scheduled window.
bool subset_window_finite(const SubsetSpec& A, std::uint64_t largest) {
    if (A.known_finite.has_value()) return *A.known_finite;
    std::uint64_t half_count = 0, full_count = 0;
    for (std::uint64_t i = 0; i < largest; ++i)
        if (A.contains(TypeId{i})) {
            ++full_count;
            if (i < largest / 2) ++half_count;
        }
    return full_count == half_count;
}

ExtinctionResult all_ones_result(std::uint64_t size) {
    ExtinctionResult result;
    result.vector = ProbVector(Window{size}, 1.0);
    result.deficits.assign(size, 0.0);
    result.residual = 0.0;
    result.converged = true;
    result.method = "empty-subset";
    return result;
}

ExtinctionResult solve_q_coupled(const ProcessSpec& spec, const SubsetSpec& A,
                                 const SolveConfig& cfg) {
    ExtinctionResult result;
    result.method = "truncation-coupled";
    std::optional<std::vector<double>> prev;
    bool stabilized = false;
    std::uint64_t quiet_steps = 0;
    std::uint64_t lagged_k = 0;
    bool have_lag = false;
    for (std::uint64_t n : cfg.window_schedule) {
        Window window = spec.clamp(Window{n});
        SideLabels labels = side_labels(A, window);
        // Immortal cutoff lags half a window behind the sterile one so the
        // far half of the target set is always pinned immortal; the window
        // edge alone can hide the set's structure behind membership parity.
        std::uint64_t k = have_lag
                              ? lagged_k
                              : side_labels(A, Window{window.size / 2})
                                    .target_count;
        FixedPointRun run =
            run_modified(spec, A, k, labels.complement_count, window, cfg);
        TruncationStep step;
        step.window = window.size;
        step.live_target = k;
        step.live_complement = labels.complement_count;
        step.iterations = run.iterations;
        step.residual = run.residual;
        step.sup_delta = prev ? sup_diff_deficits(run.deficits, *prev,
                                                  cfg.reporting_window)
                              : 1.0;
        result.monotonicity_log.push_back(step);
        result.windows_used.push_back(window.size);
        result.iterations_used += run.iterations;
        result.residual = run.residual;
        bool inner_ok = run.converged;
        prev = run.deficits;
        result.vector = std::move(run.vector);
        result.deficits = std::move(run.deficits);
        lagged_k = labels.target_count;
        have_lag = true;
        if (window.size == spec.type_count()) {
            stabilized = inner_ok;  // window exhausted a finite typeset
            break;
        }
        if (!inner_ok) {
            quiet_steps = 0;
            continue;
        }
        if (result.monotonicity_log.size() >= 2 &&
            step.sup_delta <= cfg.trunc_tol) {
            if (++quiet_steps >= 2) {
                stabilized = true;
                break;
            }
        } else {
            quiet_steps = 0;
        }
    }
    result.converged = stabilized && result.residual <= cfg.inner_tol;
    return result;
}

ExtinctionResult solve_q_nested(const ProcessSpec& spec, const SubsetSpec& A,
                                const SolveConfig& cfg) {
    ExtinctionResult result;
    result.method = "truncation-nested";
    std::optional<std::vector<double>> outer_prev;
    bool outer_stable = false;
    bool last_inner_stable = false;
    for (std::size_t mi = 0; mi < cfg.window_schedule.size(); ++mi) {
        Window kw = spec.clamp(Window{cfg.window_schedule[mi]});
        std::uint64_t k = side_labels(A, kw).target_count;
        // Inner limit: grow the sterile cutoff at fixed k.
        std::optional<std::vector<double>> inner_prev;
        FixedPointRun last;
        bool inner_stable = false;
        for (std::size_t mj = mi; mj < cfg.window_schedule.size(); ++mj) {
            Window window = spec.clamp(Window{cfg.window_schedule[mj]});
            SideLabels labels = side_labels(A, window);
            last = run_modified(spec, A, k, labels.complement_count, window, cfg);
            TruncationStep step;
            step.window = window.size;
            step.live_target = k;
            step.live_complement = labels.complement_count;
            step.iterations = last.iterations;
            step.residual = last.residual;
            step.sup_delta =
                inner_prev ? sup_diff_deficits(last.deficits, *inner_prev,
                                               cfg.reporting_window)
                           : 1.0;
            result.monotonicity_log.push_back(step);
            result.iterations_used += last.iterations;
            inner_prev = last.deficits;
            if (mj > mi && step.sup_delta <= 0.5 * cfg.trunc_tol &&
                last.converged) {
                inner_stable = true;
                break;
            }
            if (window.size == spec.type_count()) {
                inner_stable = last.converged;
                break;
            }
        }
        result.windows_used.push_back(kw.size);
        result.residual = last.residual;
        last_inner_stable = inner_stable;
        double outer_delta =
            outer_prev ? sup_diff_deficits(last.deficits, *outer_prev,
                                           cfg.reporting_window)
                       : 1.0;
        outer_prev = last.deficits;
        result.vector = std::move(last.vector);
        result.deficits = std::move(last.deficits);
        if (mi > 0 && inner_stable && outer_delta <= cfg.trunc_tol) {
            outer_stable = true;
            break;
        }
        if (kw.size == spec.type_count()) {
            outer_stable = true;
            break;
        }
    }
    result.converged =
        outer_stable && last_inner_stable && result.residual <= cfg.inner_tol;
    return result;
}

}  // namespace

FixedPointRun solve_finite_modified(const ProcessSpec& spec, const SubsetSpec& A,
                                    std::uint64_t k, std::uint64_t lprime,
                                    const Window& window, const SolveConfig& cfg) {
    cfg.validate();
    return run_modified(spec, A, k, lprime, spec.clamp(window), cfg);
}

ExtinctionResult solve_q(const ProcessSpec& spec, const SubsetSpec& A,
                         const SolveConfig& cfg) {
    cfg.validate();
    std::uint64_t largest = cfg.window_schedule.back();
    std::uint64_t scan = spec.finite() ? spec.type_count() : largest;
    if (subset_empty_on(A, scan)) {
        std::uint64_t size = spec.finite()
                                 ? spec.type_count()
                                 : std::min<std::uint64_t>(largest,
                                                           cfg.reporting_window);
        return all_ones_result(size);
    }
    if (spec.finite() && spec.type_count() <= largest)
        return solve_q_exact_finite(spec, A, cfg);

    ExtinctionResult result;
    if (subset_window_finite(A, largest)) {
        result = solve_q_never_visit_forward(spec, A, cfg);
    } else {
        result = cfg.joint_schedule ? solve_q_coupled(spec, A, cfg)
                                    : solve_q_nested(spec, A, cfg);
        if (!result.converged && cfg.joint_schedule) {
            ExtinctionResult fallback = solve_q_nested(spec, A, cfg);
            fallback.method = "truncation-coupled+nested-fallback";
            if (fallback.converged) result = std::move(fallback);
        }
    }
    result.advisory = !bulk_irreducible(spec, spec.clamp(Window{largest}));
    return result;
}

FixedPointRun solve_q0(const ProcessSpec& spec, const SubsetSpec& A,
                       const Window& window, const SolveConfig& cfg) {
    cfg.validate();
    Window w = spec.clamp(window);
    auto mode = [&](TypeId t) {
        return A.contains(t) ? CoordKind::pinned_zero : CoordKind::live;
    };
    auto boundary = [](TypeId) { return 1.0; };
    WindowSystem sys(spec, w, mode, boundary);
    return sys.iterate(1.0, cfg.inner_tol, cfg.max_inner_iters);
}

FixedPointRun solve_qXA(const ProcessSpec& spec, const SubsetSpec& A,
                        const Window& window, const SolveConfig& cfg) {
    cfg.validate();
    Window w = spec.clamp(window);
    auto mode = [&](TypeId t) {
        return A.contains(t) ? CoordKind::pinned_zero : CoordKind::live;
    };
    auto boundary = [](TypeId) { return 0.0; };
    WindowSystem sys(spec, w, mode, boundary);
    return sys.iterate(0.0, cfg.inner_tol, cfg.max_inner_iters);
}

ExtinctionResult solve_partial(const ProcessSpec& spec, const SolveConfig& cfg) {
    cfg.validate();
    Window largest = spec.clamp(Window{cfg.window_schedule.back()});
    NonSingularReport ns = is_non_singular(spec, largest);
    if (!ns.non_singular)
        throw std::invalid_argument(
            "solve_partial: process is singular on the scheduled window");
    std::uint64_t report = cfg.reporting_window;
    if (spec.finite()) report = std::min(report, spec.type_count());
    ExtinctionResult result;
    result.method = "partial-via-singletons";
    std::vector<double> values(report, 1.0);
    std::vector<double> deficits(report, 0.0);
    result.converged = true;
    for (std::uint64_t i = 0; i < report; ++i) {
        SubsetSpec self{"{" + spec.label(TypeId{i}) + "}",
                        [i](TypeId t) { return t.index == i; }, true};
        ExtinctionResult one = solve_q(spec, self, cfg);
        values[i] = one.vector[TypeId{i}];
        deficits[i] = i < one.deficits.size() ? one.deficits[i] : 0.0;
        result.iterations_used += one.iterations_used;
        result.residual = std::max(result.residual, one.residual);
        result.converged = result.converged && one.converged;
        result.advisory = result.advisory || one.advisory;
        if (result.windows_used.empty()) result.windows_used = one.windows_used;
    }
    result.vector = ProbVector(Window{report}, std::move(values));
    result.deficits = std::move(deficits);
    return result;
}

double residual(const ProcessSpec& spec, const ProbVector& s, const Window& window,
                double outside_value) {
    std::vector<TypeId> at;
    at.reserve(window.size);
    for (std::uint64_t i = 0; i < window.size; ++i) at.push_back(TypeId{i});
    ProbVector g = eval_generating_function(spec, s, at, outside_value);
    double sup = 0.0;
    for (std::uint64_t i = 0; i < window.size; ++i) {
        double v = s.window().contains(TypeId{i}) ? s[TypeId{i}] : outside_value;
        double d = std::abs(v - g[TypeId{i}]);
        if (d > sup) sup = d;
    }
    return sup;
}

std::vector<UpperBoundViolation> verify_upper_bound(const ProcessSpec& spec,
                                                    const ProbVector& s,
                                                    const ProbVector& qtilde,
                                                    double tol) {
    Window window{std::min(s.size(), qtilde.size())};
    std::vector<TypeId> at;
    for (std::uint64_t i = 0; i < window.size; ++i) at.push_back(TypeId{i});
    ProbVector g = eval_generating_function(spec, s, at, 1.0);
    for (std::uint64_t i = 0; i < window.size; ++i) {
        if (s[TypeId{i}] > g[TypeId{i}] + tol)
            throw std::invalid_argument(
                "verify_upper_bound: s > G(s) at coordinate " +
                spec.label(TypeId{i}));
    }
    std::vector<UpperBoundViolation> out;
    for (std::uint64_t i = 0; i < window.size; ++i) {
        double v = s[TypeId{i}];
        if (v < 1.0 - tol && v > qtilde[TypeId{i}] + tol)
            out.push_back({TypeId{i}, v, qtilde[TypeId{i}]});
    }
    return out;
}

std::string ExtinctionResult::to_json(const ProcessSpec* spec) const {
    nlohmann::json j;
    nlohmann::json entries = nlohmann::json::object();
    for (std::uint64_t i = 0; i < vector.size(); ++i) {
        std::string key = spec ? spec->label(TypeId{i}) : std::to_string(i);
        entries[key] = vector[TypeId{i}];
    }
    j["vector"] = entries;
    j["residual"] = residual;
    j["iterations_used"] = iterations_used;
    j["windows_used"] = windows_used;
    j["converged"] = converged;
    j["advisory"] = advisory;
    j["method"] = method;
    nlohmann::json log = nlohmann::json::array();
    for (const auto& step : monotonicity_log) {
        log.push_back({{"window", step.window},
                       {"live_target", step.live_target},
                       {"live_complement", step.live_complement},
                       {"sup_delta", step.sup_delta},
                       {"iterations", step.iterations},
                       {"residual", step.residual}});
    }
    j["monotonicity_log"] = log;
    return j.dump(2);
}

}  // namespace gwext
