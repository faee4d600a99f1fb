#ifndef SCULPT_SEARCH_HPP
#define SCULPT_SEARCH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/bigraph.hpp"
#include "sculpt/engine.hpp"
#include "sculpt/entangle.hpp"
#include "sculpt/fock.hpp"

namespace sculpt {

/// Qubit target for the operator search; local states map to edge colors
/// (0 is RED, 1 is BLUE).
struct TargetSpec {
    LogicalState target;
    int ancillas = 0;
};

enum class SearchStatus { Solved, Failed, BudgetExhausted };

inline std::string to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Solved: return "SOLVED";
        case SearchStatus::Failed: return "FAILED";
        case SearchStatus::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "?";
}

struct SearchResult {
    SculptingBigraph graph;
    double residual = 0.0;  // norm of the summed non-PM path contributions
    double fidelity = 0.0;
    SearchStatus status = SearchStatus::Failed;
};

struct SearchOptions {
    int starts = 64;
    std::uint64_t seed = 0;
    double residual_tol = 1e-8;
    double fidelity_tol = 1e-8;
    long long time_budget_ms = 30'000;
    bool allow_color_swaps = false;  // escape hatch: retry with RED/BLUE flips per dot
    int max_extra_ancillas = 3;      // extra BLACK-edge ancilla dots on retry
};

/// A single perfect-matching skeleton: dot i carries exactly one colored
/// edge to a circle; together the dots cover every circle once.
struct PmSkeleton {
    std::vector<std::pair<int, EdgeColor>> dots;
};

/// Skeleton synthesis: one skeleton per nonzero target amplitude, dot j
/// covering circle j with the term's local state as color, plus one BLACK
/// dot per ancilla circle.
inline std::vector<PmSkeleton> pms_from_target(const TargetSpec& t) {
    if (t.target.local_dim != 2)
        throw std::invalid_argument("pms_from_target: only qubit targets are supported");
    const int parties = t.target.parties;
    std::vector<PmSkeleton> skeletons;
    for (std::size_t idx = 0; idx < t.target.amps.size(); ++idx) {
        if (std::abs(t.target.amps[idx]) < kPruneThreshold) continue;
        PmSkeleton sk;
        std::size_t rest = idx;
        std::vector<int> word(parties);
        for (int p = parties - 1; p >= 0; --p) {
            word[p] = static_cast<int>(rest % 2);
            rest /= 2;
        }
        for (int p = 0; p < parties; ++p)
            sk.dots.emplace_back(p, word[p] == 0 ? EdgeColor::red() : EdgeColor::blue(2));
        for (int k = 0; k < t.ancillas; ++k)
            sk.dots.emplace_back(parties + k, EdgeColor::black());
        skeletons.push_back(std::move(sk));
    }
    if (skeletons.empty()) throw std::invalid_argument("pms_from_target: empty target");
    return skeletons;
}

namespace detail {

/// Color word of a PM over all circles, used to compare PM sets.
using ColorWord = std::vector<EdgeColor>;

inline ColorWord skeleton_word(const PmSkeleton& sk, int circles) {
    ColorWord w(circles, EdgeColor::black());
    for (const auto& [circle, color] : sk.dots) w[circle] = color;
    return w;
}

/// All distinct PM color words of a graph structure (amplitudes ignored).
inline std::vector<ColorWord> pm_words(const std::vector<std::vector<std::pair<int, EdgeColor>>>& dots,
                                       int circles) {
    std::vector<ColorWord> words;
    std::vector<int> used(circles, 0);
    std::vector<int> pick(dots.size(), -1);
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == dots.size()) {
            for (int u : used)
                if (u != 1) return;
            ColorWord w(circles, EdgeColor::black());
            for (std::size_t i = 0; i < dots.size(); ++i) w[dots[i][pick[i]].first] = dots[i][pick[i]].second;
            words.push_back(std::move(w));
            return;
        }
        for (std::size_t e = 0; e < dots[depth].size(); ++e) {
            int c = dots[depth][e].first;
            if (used[c]) continue;
            used[c] = 1;
            pick[depth] = static_cast<int>(e);
            self(self, depth + 1);
            used[c] = 0;
        }
    };
    rec(rec, 0);
    std::ranges::sort(words);
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

struct MergeCandidate {
    std::vector<std::vector<std::pair<int, EdgeColor>>> dots;  // edge sets, amplitudes open
    int edge_count = 0;
};

inline std::vector<std::vector<std::tuple<int, EdgeColor::Kind, int>>> incidence_key(
    const MergeCandidate& c) {
    std::vector<std::vector<std::tuple<int, EdgeColor::Kind, int>>> key;
    for (const auto& dot : c.dots) {
        std::vector<std::tuple<int, EdgeColor::Kind, int>> k;
        for (const auto& [circle, color] : dot) k.emplace_back(circle, color.kind, color.index);
        std::ranges::sort(k);
        key.push_back(std::move(k));
    }
    std::ranges::sort(key);
    return key;
}

}  // namespace detail

/// Dot-identification merge of the skeletons into one graph with open
/// amplitudes. Among all dot bijections whose merged graph has exactly the
/// skeleton set as its PM set, the one with fewest edges wins (ties broken
/// lexicographically on sorted incidence lists). Exact search up to 6 dots
/// per skeleton; identity identification above that.
inline SculptingBigraph candidate_bigraph(const std::vector<PmSkeleton>& skeletons, int parties,
                                          int ancillas) {
    if (skeletons.empty()) throw std::invalid_argument("candidate_bigraph: no skeletons");
    const std::size_t dot_count = skeletons.front().dots.size();
    for (const auto& sk : skeletons)
        if (sk.dots.size() != dot_count)
            throw std::invalid_argument("candidate_bigraph: inconsistent skeleton shapes");
    const int circles = parties + ancillas;

    std::vector<detail::ColorWord> wanted;
    for (const auto& sk : skeletons) wanted.push_back(detail::skeleton_word(sk, circles));
    std::ranges::sort(wanted);
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    auto merge = [&](const std::vector<std::vector<int>>& maps) {
        detail::MergeCandidate c;
        c.dots.resize(dot_count);
        for (std::size_t s = 0; s < skeletons.size(); ++s)
            for (std::size_t i = 0; i < dot_count; ++i) {
                auto edge = skeletons[s].dots[maps[s][i]];
                if (std::ranges::find(c.dots[i], edge) == c.dots[i].end())
                    c.dots[i].push_back(edge);
            }
        for (const auto& dot : c.dots) c.edge_count += static_cast<int>(dot.size());
        return c;
    };

    std::optional<detail::MergeCandidate> best;
    auto consider = [&](const detail::MergeCandidate& c) {
        if (detail::pm_words(c.dots, circles) != wanted) return;
        if (!best || c.edge_count < best->edge_count ||
            (c.edge_count == best->edge_count &&
             detail::incidence_key(c) < detail::incidence_key(*best)))
            best = c;
    };

    std::vector<int> identity(dot_count);
    std::iota(identity.begin(), identity.end(), 0);
    if (dot_count <= 6) {
        // nested exact search: skeleton 0 keeps identity, the rest permute
        std::vector<std::vector<int>> maps(skeletons.size(), identity);
        auto rec = [&](auto&& self, std::size_t s) -> void {
            if (s == skeletons.size()) {
                consider(merge(maps));
                return;
            }
            std::vector<int> perm = identity;
            do {
                maps[s] = perm;
                self(self, s + 1);
            } while (std::next_permutation(perm.begin(), perm.end()));
        };
        if (skeletons.size() >= 2) rec(rec, 1);
        else consider(merge(maps));
    } else {
        consider(merge(std::vector<std::vector<int>>(skeletons.size(), identity)));
    }
    if (!best)
        throw std::runtime_error("candidate_bigraph: no dot identification preserves the PM set");

    SculptingBigraph g;
    g.system_modes = parties;
    g.ancilla_modes = ancillas;
    g.internal_dim = 2;
    for (const auto& dot : best->dots) {
        BigraphDot bd;
        double w = 1.0 / std::sqrt(double(dot.size()));
        for (const auto& [circle, color] : dot) bd.edges.push_back({circle, w, color});
        g.dots.push_back(std::move(bd));
    }
    return g;
}

struct VerifyReport {
    bool no_bunching = false;
    double fidelity = 0.0;
    double success = 0.0;
    EntanglementClass classification;
};

/// Authoritative end-to-end check of a concrete graph against the target,
/// independent of the solver's path machinery.
inline VerifyReport verify_candidate(const SculptingBigraph& g, const TargetSpec& t) {
    VerifyReport report;
    SculptingOperator op = to_sculpting_operator(g);
    FockState final_state = apply_sculpting(op, initial_state_for(g));
    NoBunchingReport nb = check_no_bunching(final_state, g.system_modes, g.ancilla_modes);
    report.no_bunching = nb.pass;
    if (!nb.pass || final_state.is_zero()) return report;
    auto [logical, success] =
        to_logical_state(final_state, g.system_modes, 2, plus_minus_basis());
    report.fidelity = fidelity_up_to_phase(logical, t.target);
    report.success = success;
    report.classification = classify(logical);
    return report;
}

namespace detail {

/// Precomputed path data for the least-squares solve: which edge each
/// factor picks, whether the path is a PM, the applied state, and its
/// logical-basis overlaps.
struct PathData {
    std::vector<int> edge_choice;
    bool is_pm = false;
    FockState applied;                 // annihilations only, unit coefficient
    std::vector<cplx> logical_overlap; // per logical word
};

struct SolveModel {
    const SculptingBigraph* graph = nullptr;
    const TargetSpec* target = nullptr;
    std::vector<PathData> paths;
    std::vector<OccupationConfig> nonpm_configs;  // union of non-PM supports
    std::vector<int> dot_offset;                  // parameter offset per dot
    int param_count = 0;
};

inline SolveModel build_model(const SculptingBigraph& g, const TargetSpec& t) {
    SolveModel m;
    m.graph = &g;
    m.target = &t;
    for (const auto& dot : g.dots) {
        m.dot_offset.push_back(m.param_count);
        m.param_count += static_cast<int>(dot.edges.size());
    }
    FockState sym = initial_state_for(g);
    const int circles = g.total_circles();

    // logical product basis states for the overlap rows
    std::vector<FockState> basis_states;
    const auto basis = plus_minus_basis();
    std::size_t dim = t.target.amps.size();
    for (std::size_t idx = 0; idx < dim; ++idx) {
        FockState b = vacuum(sym.spatial_count(), 2);
        std::size_t rest = idx;
        std::vector<int> word(g.system_modes);
        for (int p = g.system_modes - 1; p >= 0; --p) {
            word[p] = static_cast<int>(rest % 2);
            rest /= 2;
        }
        for (int p = 0; p < g.system_modes; ++p) b = apply_creation(b, p, basis[word[p]]);
        basis_states.push_back(std::move(b));
    }

    std::vector<int> choice(g.dots.size(), 0);
    while (true) {
        PathData pd;
        pd.edge_choice = choice;
        std::vector<int> used(circles, 0);
        FockState cur = sym;
        for (std::size_t i = 0; i < g.dots.size(); ++i) {
            const auto& e = g.dots[i].edges[choice[i]];
            ++used[e.circle];
            if (!cur.is_zero()) cur = apply_annihilation(cur, e.circle, e.color.resolve(2));
        }
        pd.is_pm = std::ranges::all_of(used, [](int u) { return u == 1; });
        pd.applied = std::move(cur);
        for (const auto& b : basis_states) pd.logical_overlap.push_back(inner_product(b, pd.applied));
        if (!pd.is_pm)
            for (const auto& [config, amp] : pd.applied.terms())
                if (std::ranges::find(m.nonpm_configs, config) == m.nonpm_configs.end())
                    m.nonpm_configs.push_back(config);
        m.paths.push_back(std::move(pd));
        // odometer
        std::size_t i = 0;
        for (; i < g.dots.size(); ++i) {
            if (++choice[i] < static_cast<int>(g.dots[i].edges.size())) break;
            choice[i] = 0;
        }
        if (i == g.dots.size()) break;
    }
    std::ranges::sort(m.nonpm_configs);
    return m;
}

/// Per-dot normalized weights from the raw parameter vector.
inline std::vector<double> normalized_weights(const SolveModel& m, const Eigen::VectorXd& theta) {
    std::vector<double> w(m.param_count, 0.0);
    const auto& dots = m.graph->dots;
    for (std::size_t i = 0; i < dots.size(); ++i) {
        int off = m.dot_offset[i];
        int n = static_cast<int>(dots[i].edges.size());
        double n2 = 0.0;
        for (int e = 0; e < n; ++e) n2 += theta[off + e] * theta[off + e];
        double inv = n2 > 1e-18 ? 1.0 / std::sqrt(n2) : 0.0;
        for (int e = 0; e < n; ++e) w[off + e] = theta[off + e] * inv;
    }
    return w;
}

/// Residual vector: re/im of the summed non-PM contributions per config,
/// then one fidelity-deficit entry.
inline Eigen::VectorXd residual_vector(const SolveModel& m, const Eigen::VectorXd& theta) {
    const auto w = normalized_weights(m, theta);
    std::vector<cplx> nonpm(m.nonpm_configs.size(), 0.0);
    std::vector<cplx> logical(m.target->target.amps.size(), 0.0);
    for (const auto& p : m.paths) {
        double coeff = 1.0;
        for (std::size_t i = 0; i < p.edge_choice.size(); ++i)
            coeff *= w[m.dot_offset[i] + p.edge_choice[i]];
        if (coeff == 0.0) continue;
        if (!p.is_pm)
            for (const auto& [config, amp] : p.applied.terms()) {
                auto it = std::ranges::lower_bound(m.nonpm_configs, config);
                nonpm[it - m.nonpm_configs.begin()] += coeff * amp;
            }
        for (std::size_t k = 0; k < logical.size(); ++k)
            logical[k] += coeff * p.logical_overlap[k];
    }
    Eigen::VectorXd r(2 * nonpm.size() + 1);
    for (std::size_t i = 0; i < nonpm.size(); ++i) {
        r[2 * i] = nonpm[i].real();
        r[2 * i + 1] = nonpm[i].imag();
    }
    double n2 = 0.0;
    cplx overlap = 0.0;
    for (std::size_t k = 0; k < logical.size(); ++k) {
        n2 += std::norm(logical[k]);
        overlap += std::conj(m.target->target.amps[k]) * logical[k];
    }
    double f2 = n2 > 1e-18 ? std::norm(overlap) / n2 : 0.0;
    r[r.size() - 1] = std::sqrt(std::max(0.0, 1.0 - f2));
    return r;
}

inline double nonpm_norm(const SolveModel& m, const Eigen::VectorXd& theta) {
    Eigen::VectorXd r = residual_vector(m, theta);
    double n2 = 0.0;
    for (Eigen::Index i = 0; i + 1 < r.size(); ++i) n2 += r[i] * r[i];
    return std::sqrt(n2);
}

/// Levenberg-Marquardt with central-difference Jacobians (step 1e-6).
inline Eigen::VectorXd lm_descend(const SolveModel& m, Eigen::VectorXd theta, int max_iter = 120) {
    const double h = 1e-6;
    double lambda = 1e-3;
    Eigen::VectorXd r = residual_vector(m, theta);
    double cost = r.squaredNorm();
    for (int iter = 0; iter < max_iter && cost > 1e-26; ++iter) {
        Eigen::MatrixXd jac(r.size(), theta.size());
        for (Eigen::Index j = 0; j < theta.size(); ++j) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp[j] += h;
            tm[j] -= h;
            jac.col(j) = (residual_vector(m, tp) - residual_vector(m, tm)) / (2.0 * h);
        }
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd jtr = jac.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd a = jtj;
            a.diagonal().array() += lambda;
            Eigen::VectorXd step = a.ldlt().solve(jtr);
            Eigen::VectorXd next = theta - step;
            Eigen::VectorXd rn = residual_vector(m, next);
            double cn = rn.squaredNorm();
            if (cn < cost) {
                theta = std::move(next);
                r = std::move(rn);
                cost = cn;
                lambda = std::max(lambda * 0.3, 1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }
    return theta;
}

}  // namespace detail

/// Weight solve on a fixed structure: multistart seeded local descent
/// minimizing the non-PM contributions plus a fidelity deficit, followed by
/// an independent full-pipeline verification of the best candidate.
inline SearchResult solve_weights(const SculptingBigraph& g, const TargetSpec& t,
                                  const SearchOptions& opt = {}) {
    detail::SolveModel model = detail::build_model(g, t);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto start_time = std::chrono::steady_clock::now();

    SearchResult best;
    best.graph = g;
    best.residual = std::numeric_limits<double>::infinity();
    bool out_of_time = false;

    for (int start = 0; start < opt.starts; ++start) {
        Eigen::VectorXd theta(model.param_count);
        for (int j = 0; j < model.param_count; ++j) theta[j] = dist(rng);
        if (std::chrono::steady_clock::now() - start_time >
            std::chrono::milliseconds(opt.time_budget_ms)) {
            out_of_time = true;
            break;
        }
        theta = detail::lm_descend(model, theta);
        double residual = detail::nonpm_norm(model, theta);

        SculptingBigraph candidate = g;
        const auto w = detail::normalized_weights(model, theta);
        for (std::size_t i = 0; i < candidate.dots.size(); ++i)
            for (std::size_t e = 0; e < candidate.dots[i].edges.size(); ++e)
                candidate.dots[i].edges[e].amplitude =
                    w[model.dot_offset[i] + static_cast<int>(e)];
        VerifyReport report = verify_candidate(candidate, t);

        if (residual < best.residual ||
            (residual == best.residual && report.fidelity > best.fidelity)) {
            best.graph = std::move(candidate);
            best.residual = residual;
            best.fidelity = report.fidelity;
        }
        if (best.residual < opt.residual_tol && best.fidelity > 1.0 - opt.fidelity_tol) {
            best.status = SearchStatus::Solved;
            return best;
        }
    }
    best.status = out_of_time ? SearchStatus::BudgetExhausted : SearchStatus::Failed;
    return best;
}

namespace detail {

inline SculptingBigraph swap_red_blue(const SculptingBigraph& g, unsigned mask) {
    SculptingBigraph out = g;
    for (std::size_t i = 0; i < out.dots.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        for (auto& e : out.dots[i].edges) {
            if (e.color.is_red()) e.color = EdgeColor::blue(2);
            else if (e.color.is_blue(2)) e.color = EdgeColor::red();
        }
    }
    return out;
}

}  // namespace detail

/// The full four-step pipeline: skeletons, candidate merge, weight solve,
/// and structural retries (extra BLACK ancilla dots; optional color flips).
inline SearchResult run_search(const TargetSpec& t, const SearchOptions& opt = {}) {
    SearchResult best;
    best.residual = std::numeric_limits<double>::infinity();
    for (int extra = 0; extra <= opt.max_extra_ancillas; ++extra) {
        TargetSpec round = t;
        round.ancillas = t.ancillas + extra;
        SculptingBigraph candidate;
        try {
            candidate = candidate_bigraph(pms_from_target(round), round.target.parties,
                                          round.ancillas);
        } catch (const std::runtime_error&) {
            continue;  // no PM-preserving identification at this ancilla count
        }
        SearchResult r = solve_weights(candidate, round, opt);
        if (r.residual < best.residual) best = r;
        if (best.status == SearchStatus::Solved) return best;
        if (opt.allow_color_swaps) {
            for (unsigned mask = 1; mask < (1u << candidate.dots.size()); ++mask) {
                SearchOptions reduced = opt;
                reduced.starts = std::max(1, opt.starts / 8);
                SearchResult rs =
                    solve_weights(detail::swap_red_blue(candidate, mask), round, reduced);
                if (rs.residual < best.residual) best = rs;
                if (best.status == SearchStatus::Solved) return best;
            }
        }
    }
    return best;
}

}  // namespace sculpt

#endif  // SCULPT_SEARCH_HPP
