#include "gwext/examples.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gwext::examples {

std::uint64_t grid_index(GridPoint p) {
    std::uint64_t d = p.level + p.phase;
    return d * (d + 1) / 2 + p.level;
}

GridPoint grid_point(std::uint64_t index) {
    // Largest d with d(d+1)/2 <= index.
    std::uint64_t d = static_cast<std::uint64_t>(
        (std::sqrt(8.0 * static_cast<double>(index) + 1.0) - 1.0) / 2.0);
    while (d * (d + 1) / 2 > index) --d;
    while ((d + 1) * (d + 2) / 2 <= index) ++d;
    std::uint64_t level = index - d * (d + 1) / 2;
    return GridPoint{level, d - level};
}

std::string grid_label(TypeId t) {
    GridPoint p = grid_point(t.index);
    return "(" + std::to_string(p.level) + "," + std::to_string(p.phase) + ")";
}

void LevelPhaseParams::validate() const {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("level-phase: p must lie in (0,1)");
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("level-phase: q must lie in (0,1)");
    if (!(r > 0.0))
        throw std::invalid_argument("level-phase: r must be positive");
}

ProcessSpec level_phase_process(const LevelPhaseParams& params) {
    params.validate();
    const double p = params.p, q = params.q, r = params.r;
    auto law = [p, q, r](TypeId t) -> OffspringLaw {
        GridPoint g = grid_point(t.index);
        std::vector<CountComponent> comps;
        if (g.level == 0 && g.phase == 0) {
            comps.push_back(CountComponent::bernoulli(grid_type(1, 0), q));
        } else if (g.level == 0) {
            comps.push_back(
                CountComponent::bernoulli(grid_type(0, g.phase - 1), p));
        } else if (g.phase == 0) {
            comps.push_back(
                CountComponent::deterministic(grid_type(g.level, 1), 1));
            comps.push_back(
                CountComponent::bernoulli(grid_type(g.level + 1, 0), q));
        } else {
            double mean = std::pow(r, 1.0 - static_cast<double>(g.phase));
            comps.push_back(
                CountComponent::geometric(grid_type(g.level - 1, g.phase), mean));
            comps.push_back(CountComponent::deterministic(
                grid_type(g.level, g.phase + 1), 1));
        }
        return product_law(std::move(comps));
    };
    std::ostringstream name;
    name << "level-phase(p=" << p << ",q=" << q << ",r=" << r << ")";
    return ProcessSpec(name.str(), ProcessSpec::kCountablyInfinite, law,
                       grid_label);
}

SubsetSpec level_subset(std::uint64_t i) {
    return SubsetSpec{"L" + std::to_string(i),
                      [i](TypeId t) { return grid_point(t.index).level == i; },
                      false};
}

SubsetSpec phase_subset(std::uint64_t j) {
    return SubsetSpec{"P" + std::to_string(j),
                      [j](TypeId t) { return grid_point(t.index).phase == j; },
                      false};
}

namespace {
bool stripe_member(std::uint64_t i, GridPoint g) {
    return (g.level == i && g.phase % 2 == 0) || (g.phase == 2 * i + 1);
}
}  // namespace

SubsetSpec stripe_subset(std::uint64_t i) {
    return SubsetSpec{"S" + std::to_string(i),
                      [i](TypeId t) { return stripe_member(i, grid_point(t.index)); },
                      false};
}

SubsetSpec stripe_complement(std::uint64_t i) {
    return SubsetSpec{"not-S" + std::to_string(i),
                      [i](TypeId t) { return !stripe_member(i, grid_point(t.index)); },
                      false};
}

std::vector<SubsetSpec> level_family(std::uint64_t first, std::uint64_t count) {
    std::vector<SubsetSpec> out;
    for (std::uint64_t i = 0; i < count; ++i)
        out.push_back(level_subset(first + i));
    return out;
}

std::vector<SubsetSpec> stripe_family(std::uint64_t count) {
    std::vector<SubsetSpec> out;
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(stripe_subset(i));
    return out;
}

ProcessSpec quadrant_process() {
    auto law = [](TypeId t) -> OffspringLaw {
        GridPoint g = grid_point(t.index);
        std::vector<JointOutcome> outcomes;
        outcomes.push_back({1.0 / 3.0, {}});
        outcomes.push_back({1.0 / 2.0, {{grid_type(g.level, g.phase), 3}}});
        outcomes.push_back({1.0 / 12.0, {{grid_type(g.level, g.phase + 1), 3}}});
        outcomes.push_back({1.0 / 12.0, {{grid_type(g.level + 1, g.phase), 3}}});
        return joint_law(std::move(outcomes));
    };
    return ProcessSpec("quadrant", ProcessSpec::kCountablyInfinite, law,
                       grid_label);
}

bool quadrant_implies(GridPoint a, GridPoint b) {
    return a.level <= b.level && a.phase <= b.phase;
}

FamilyGraph quadrant_window_graph(std::uint32_t side) {
    if (side == 0 || static_cast<std::uint64_t>(side) * side > 64)
        throw std::invalid_argument("quadrant_window_graph: side*side <= 64");
    std::vector<std::string> labels;
    auto vid = [side](std::uint32_t i, std::uint32_t j) { return i * side + j; };
    for (std::uint32_t i = 0; i < side; ++i)
        for (std::uint32_t j = 0; j < side; ++j)
            labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) +
                             ")");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < side; ++i)
        for (std::uint32_t j = 0; j < side; ++j) {
            if (i + 1 < side) edges.push_back({vid(i, j), vid(i + 1, j)});
            if (j + 1 < side) edges.push_back({vid(i, j), vid(i, j + 1)});
        }
    FamilyGraph g = FamilyGraph::make(std::move(labels), edges);
    VertexSet open = 0;
    for (std::uint32_t i = 0; i < side; ++i)
        for (std::uint32_t j = 0; j < side; ++j)
            if (i + 1 == side || j + 1 == side) open |= vertex_bit(vid(i, j));
    g.mark_window_of_infinite(
        "quadrant grid order; every boundary vertex continues", open);
    g.set_descriptors(CardinalityClass::countably_infinite(),
                      CardinalityClass::countably_infinite());
    return g;
}

FamilyGraph lateral_tree_graph(std::uint32_t depth) {
    if (depth < 1)
        throw std::invalid_argument("lateral_tree_graph: depth >= 1");
    std::uint64_t count = (std::uint64_t{1} << (depth + 1)) - 1;
    if (count > 64)
        throw std::invalid_argument("lateral_tree_graph: window exceeds 64");
    auto offset = [](std::uint32_t len) {
        return (std::uint64_t{1} << len) - 1;
    };
    auto vid = [&](std::uint32_t len, std::uint64_t code) {
        return static_cast<std::uint32_t>(offset(len) + code);
    };
    std::vector<std::string> labels;
    for (std::uint32_t len = 0; len <= depth; ++len)
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << len); ++code) {
            if (len == 0) {
                labels.push_back("e");
                continue;
            }
            std::string s;
            for (std::uint32_t b = 0; b < len; ++b)
                s += (code >> (len - 1 - b)) & 1 ? '+' : '-';
            labels.push_back(s);
        }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t len = 1; len <= depth; ++len)
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << len); ++code) {
            // Parent implies child.
            edges.push_back({vid(len - 1, code >> 1), vid(len, code)});
            if ((code & 1) == 0) {
                // Right sibling and its all-left descendants imply this one.
                std::uint64_t base = code | 1;
                for (std::uint32_t m = len; m <= depth; ++m)
                    edges.push_back({vid(m, base << (m - len)), vid(len, code)});
            }
        }
    FamilyGraph g = FamilyGraph::make(std::move(labels), edges);
    VertexSet open = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << depth); ++code)
        open |= vertex_bit(vid(depth, code));
    g.mark_window_of_infinite(
        "oriented binary tree with lateral edges; the deepest layer continues",
        open);
    g.set_descriptors(CardinalityClass::countably_infinite(),
                      CardinalityClass::uncountable());
    return g;
}

double geometric_composition(std::uint64_t i, std::uint64_t j, double r,
                             double s) {
    if (i < 1) throw std::invalid_argument("geometric_composition: i >= 1");
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("geometric_composition: s in [0,1]");
    if (s == 1.0) return 1.0;
    double a = std::pow(r, static_cast<double>(j) - 1.0);  // r^(j-1)
    double lead = std::pow(a, static_cast<double>(i)) / (1.0 - s);
    double tail = 0.0;
    double pw = 1.0;
    for (std::uint64_t l = 0; l < i; ++l) {
        tail += pw;
        pw *= a;
    }
    return 1.0 - 1.0 / (lead + tail);
}

SeriesResult frozen_descendant_series(std::uint64_t i, double p, double r,
                                      std::uint64_t terms) {
    if (terms < 1)
        throw std::invalid_argument("frozen_descendant_series: terms >= 1");
    SeriesResult out;
    out.ratio = p / std::pow(r, static_cast<double>(i));
    out.convergent = out.ratio < 1.0;
    double sum = 0.0;
    for (std::uint64_t j = 1; j <= terms; ++j) {
        double lg = std::lgamma(static_cast<double>(i + j)) -
                    std::lgamma(static_cast<double>(j)) -
                    std::lgamma(static_cast<double>(i + 1));
        double logt = lg -
                      static_cast<double>(i) * (static_cast<double>(j) - 1.0) *
                          std::log(r) +
                      static_cast<double>(j) * std::log(p);
        if (logt > 700.0) {
            sum = std::numeric_limits<double>::infinity();
            break;
        }
        sum += std::exp(logt);
    }
    out.partial_sum = sum;
    return out;
}

int distinct_value_count(std::vector<double> values, double threshold) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    int count = 1;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] - values[i - 1] > threshold) ++count;
    return count;
}

std::vector<SweepRow> run_level_sweep(double p, double q, const SweepSpec& sweep,
                                      const SolveConfig& cfg, unsigned threads) {
    if (sweep.r_values.empty())
        throw std::invalid_argument("sweep: r_values must be nonempty");
    for (double r : sweep.r_values)
        if (!(r > 0.0))
            throw std::invalid_argument("sweep: r values must be positive");
    if (sweep.levels < 1)
        throw std::invalid_argument("sweep: levels >= 1");

    const std::size_t points = sweep.r_values.size();
    std::vector<std::vector<SweepRow>> per_point(points);
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        while (true) {
            std::size_t at = cursor.fetch_add(1);
            if (at >= points) break;
            double r = sweep.r_values[at];
            LevelPhaseParams params{p, q, r};
            ProcessSpec spec = level_phase_process(params);
            TypeId rt = grid_type(sweep.report_type.level, sweep.report_type.phase);
            std::vector<SweepRow> rows;
            std::vector<double> values;
            for (std::uint64_t lvl = 1; lvl <= sweep.levels; ++lvl) {
                SweepRow row;
                row.r = r;
                row.level = lvl;
                try {
                    ExtinctionResult res = solve_q(spec, level_subset(lvl), cfg);
                    row.converged = res.converged;
                    row.residual = res.residual;
                    row.q_value = res.vector.window().contains(rt)
                                      ? res.vector[rt]
                                      : 1.0;
                } catch (const std::exception&) {
                    row.converged = false;
                }
                if (row.converged) values.push_back(row.q_value);
                rows.push_back(row);
            }
            int d = distinct_value_count(values, sweep.distinct_threshold);
            int dl = distinct_value_count(values, sweep.distinct_threshold * 10);
            int dt = distinct_value_count(values, sweep.distinct_threshold / 10);
            for (auto& row : rows) {
                row.distinct_count = d;
                row.distinct_count_loose = dl;
                row.distinct_count_tight = dt;
            }
            per_point[at] = std::move(rows);
        }
    };
    unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency()
                                      : threads;
    if (n_threads <= 1 || points <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(n_threads, points); ++t)
            pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::vector<SweepRow> rows;
    for (auto& chunk : per_point)
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    if (!sweep.output_path.empty()) write_sweep_csv(sweep.output_path, rows);
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "r,level,q_value,converged,residual,distinct_count,"
           "distinct_count_loose,distinct_count_tight\n";
    out.precision(12);
    for (const auto& row : rows) {
        out << row.r << ',' << row.level << ',' << row.q_value << ','
            << (row.converged ? 1 : 0) << ',' << row.residual << ','
            << row.distinct_count << ',' << row.distinct_count_loose << ','
            << row.distinct_count_tight << '\n';
    }
}

}  // namespace gwext::examples
