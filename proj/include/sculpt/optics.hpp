#ifndef SCULPT_OPTICS_HPP
#define SCULPT_OPTICS_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sculpt/fock.hpp"

namespace sculpt::optics {

enum class Pol { H = 0, V = 1 };

inline int pol_index(Pol p) { return static_cast<int>(p); }

/// Polarization-encoded photonic state over named paths. Paths are registered
/// up front; the underlying Fock state uses their indices as spatial modes
/// with internal dimension 2 (H = 0, V = 1).
class OpticalState {
public:
    explicit OpticalState(std::vector<std::string> paths)
        : paths_(std::move(paths)), state_(static_cast<int>(paths_.size()), 2) {
        for (std::size_t i = 0; i < paths_.size(); ++i) {
            if (!index_.emplace(paths_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("OpticalState: duplicate path label " + paths_[i]);
        }
        state_ = vacuum(static_cast<int>(paths_.size()), 2);
    }

    const std::vector<std::string>& paths() const { return paths_; }
    const FockState& fock() const { return state_; }
    void set_fock(FockState s) {
        state_.require_same_dims(s);
        state_ = std::move(s);
    }

    int path_index(const std::string& path) const {
        auto it = index_.find(path);
        if (it == index_.end()) throw std::invalid_argument("unknown path: " + path);
        return it->second;
    }

    void create_photon(const std::string& path, Pol pol) {
        state_ = apply_creation(state_, path_index(path), InternalVector::level(2, pol_index(pol)));
    }

    double norm_squared() const { return state_.norm_squared(); }

    /// Total photon number weighted by amplitude; integer-valued for
    /// number eigenstates, used for conservation checks.
    int max_photons() const {
        int m = 0;
        for (const auto& [c, a] : state_.terms()) m = std::max(m, c.total_bosons());
        return m;
    }

private:
    std::vector<std::string> paths_;
    std::map<std::string, int> index_;
    FockState state_;
};

namespace detail {

/// Rewrites the creation operators of the given modes by the column map
/// `images`: a^dag_{keys[k]} -> sum_m images[k][m].second a^dag_{images[k][m].first}.
/// Implemented by stripping the affected bosons from each term and
/// re-creating them through the transformed combinations.
inline FockState apply_mode_map(const FockState& state, const std::vector<ModeKey>& keys,
                                const std::vector<std::vector<std::pair<ModeKey, cplx>>>& images) {
    FockState out(state.spatial_count(), state.internal_dim());
    for (const auto& [config, amp] : state.terms()) {
        // occupation of the affected modes in this term
        std::vector<int> counts(keys.size(), 0);
        OccupationConfig base = config;
        double strip_factor = 1.0;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            while (true) {
                auto [next, n] = base.with_removed(keys[k]);
                if (n == 0) break;
                base = std::move(next);
                ++counts[k];
                strip_factor *= std::sqrt(double(n));
            }
        }
        // |config> = prod_k (a^dag_k)^{n_k} |base> / strip_factor
        FockState piece(state.spatial_count(), state.internal_dim());
        piece.add_term(base, amp / strip_factor);
        for (std::size_t k = 0; k < keys.size(); ++k)
            for (int b = 0; b < counts[k]; ++b) piece = apply_creation_combo(piece, images[k]);
        out = out.plus(piece);
    }
    return out.pruned();
}

}  // namespace detail

/// Half-wave plate on one path: a^dag_H -> (a^dag_H + a^dag_V)/sqrt2,
/// a^dag_V -> (a^dag_H - a^dag_V)/sqrt2. Self-inverse.
inline void apply_hwp(OpticalState& s, const std::string& path) {
    int p = s.path_index(path);
    const double w = 1.0 / std::sqrt(2.0);
    ModeKey h{p, 0}, v{p, 1};
    s.set_fock(detail::apply_mode_map(s.fock(), {h, v},
                                      {{{h, w}, {v, w}}, {{h, w}, {v, -w}}}));
}

/// Polarizing beam splitter: H transmits (in1 -> out1, in2 -> out2), V
/// crosses (in1 -> out2, in2 -> out1). The convention is pinned by the
/// five-step Bell circuit regression.
inline void apply_pbs(OpticalState& s, const std::string& in1, const std::string& in2,
                      const std::string& out1, const std::string& out2) {
    int i1 = s.path_index(in1), i2 = s.path_index(in2);
    int o1 = s.path_index(out1), o2 = s.path_index(out2);
    if (i1 == i2 || o1 == o2) throw std::invalid_argument("apply_pbs: path collision");
    ModeKey i1h{i1, 0}, i1v{i1, 1}, i2h{i2, 0}, i2v{i2, 1};
    ModeKey o1h{o1, 0}, o1v{o1, 1}, o2h{o2, 0}, o2v{o2, 1};
    s.set_fock(detail::apply_mode_map(
        s.fock(), {i1h, i1v, i2h, i2v},
        {{{o1h, 1.0}}, {{o2v, 1.0}}, {{o2h, 1.0}}, {{o1v, 1.0}}}));
}

/// Mirror crossing: exchanges two paths entirely (both polarizations).
inline void apply_cross(OpticalState& s, const std::string& a, const std::string& b) {
    int pa = s.path_index(a), pb = s.path_index(b);
    if (pa == pb) throw std::invalid_argument("apply_cross: identical paths");
    ModeKey ah{pa, 0}, av{pa, 1}, bh{pb, 0}, bv{pb, 1};
    s.set_fock(detail::apply_mode_map(s.fock(), {ah, av, bh, bv},
                                      {{{bh, 1.0}}, {{bv, 1.0}}, {{ah, 1.0}}, {{av, 1.0}}}));
}

/// One detector requirement: `count` photons, all with polarization `pol`,
/// and nothing else on the path.
struct HeraldRequirement {
    std::string path;
    int count = 0;
    Pol pol = Pol::H;
};

struct HeraldPattern {
    std::vector<HeraldRequirement> requirements;
};

struct HeraldOutcome {
    FockState remainder;  // detector modes removed (now empty)
    double probability = 0.0;
};

/// Projects onto the exact photon counts/polarizations at the detector
/// paths, removes those photons, and returns the unnormalized remainder with
/// its squared norm as the branch probability. A zero branch is valid.
inline HeraldOutcome herald(const OpticalState& s, const HeraldPattern& pattern) {
    FockState out(s.fock().spatial_count(), s.fock().internal_dim());
    for (const auto& [config, amp] : s.fock().terms()) {
        bool match = true;
        for (const auto& req : pattern.requirements) {
            int p = s.path_index(req.path);
            int want_h = req.pol == Pol::H ? req.count : 0;
            int want_v = req.pol == Pol::V ? req.count : 0;
            if (config.count({p, 0}) != want_h || config.count({p, 1}) != want_v) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        OccupationConfig stripped = config;
        for (const auto& req : pattern.requirements) {
            int p = s.path_index(req.path);
            for (int pol = 0; pol < 2; ++pol)
                while (true) {
                    auto [next, n] = stripped.with_removed({p, pol});
                    if (n == 0) break;
                    stripped = std::move(next);
                }
        }
        out.add_term(stripped, amp);
    }
    out = out.pruned();
    return {out, out.norm_squared()};
}

// --- circuit description -------------------------------------------------

struct HwpElement {
    std::string path;
};
struct PbsElement {
    std::string in1, in2, out1, out2;
};
struct DetectorElement {
    std::string path;
    Pol pol = Pol::H;
};
struct CrossElement {
    std::string a, b;
};

using CircuitElement = std::variant<HwpElement, PbsElement, DetectorElement, CrossElement>;

struct Circuit {
    std::vector<std::string> paths;
    std::vector<CircuitElement> elements;

    void run(OpticalState& s) const {
        for (const auto& el : elements) apply_element(s, el);
    }

    static void apply_element(OpticalState& s, const CircuitElement& el) {
        if (const auto* hwp = std::get_if<HwpElement>(&el)) apply_hwp(s, hwp->path);
        else if (const auto* pbs = std::get_if<PbsElement>(&el))
            apply_pbs(s, pbs->in1, pbs->in2, pbs->out1, pbs->out2);
        else if (const auto* cross = std::get_if<CrossElement>(&el))
            apply_cross(s, cross->a, cross->b);
        // detectors are passive markers; heralding happens afterwards
    }

    std::vector<DetectorElement> detectors() const {
        std::vector<DetectorElement> d;
        for (const auto& el : elements)
            if (const auto* det = std::get_if<DetectorElement>(&el)) d.push_back(*det);
        return d;
    }
};

/// Heralded single-boson subtractor block: a PBS merging the two input
/// wires, an HWP on the detector arm, a second PBS splitting that arm into
/// two polarization-resolved detector ports. Subtracting from wire_a heralds
/// on the H detector, from wire_b on the V detector.
inline Circuit heralded_subtractor(const std::string& wire_a, const std::string& wire_b) {
    Circuit frag;
    std::string det = wire_b;  // detector arm label base
    frag.paths = {wire_a, wire_b, det + "1", det + "2"};
    frag.elements = {
        PbsElement{wire_a, wire_b, wire_a, wire_b},
        HwpElement{wire_b},
        PbsElement{wire_b, det + "0", det + "1", det + "2"},
        DetectorElement{det + "1", Pol::H},
        DetectorElement{det + "2", Pol::V},
    };
    return frag;
}

/// The five-step Bell circuit: each input mode is split by polarization,
/// the two V arms cross over so every subtractor block mixes one arm from
/// each photon, and the subtracted arms are polarization-resolved at paths
/// 121/122 and 221/222.
inline Circuit bell_circuit() {
    Circuit c;
    c.paths = {"1", "2", "11", "12", "21", "22", "120", "220", "121", "122", "221", "222"};
    c.elements = {
        // step 1: basis rotation on the input modes
        HwpElement{"1"}, HwpElement{"2"},
        // step 2: split each mode by polarization
        PbsElement{"1", "10", "11", "12"}, PbsElement{"2", "20", "21", "22"},
        // step 3: crossing of the V arms, then rotation inside the subtractors
        CrossElement{"12", "22"},
        HwpElement{"11"}, HwpElement{"12"}, HwpElement{"21"}, HwpElement{"22"},
        // step 4: recombination
        PbsElement{"11", "12", "11", "12"}, PbsElement{"21", "22", "21", "22"},
        // step 5: polarization-resolved detection on the subtracted arms
        HwpElement{"12"}, HwpElement{"22"},
        PbsElement{"12", "120", "121", "122"}, PbsElement{"22", "220", "221", "222"},
        DetectorElement{"121", Pol::H}, DetectorElement{"122", Pol::V},
        DetectorElement{"221", Pol::H}, DetectorElement{"222", Pol::V},
    };
    return c;
}

struct BellBranch {
    std::string herald_121_122;  // "H" if 121 clicked, "V" if 122 clicked
    std::string herald_221_222;
    FockState state;  // unnormalized conditional state on paths 11 (mode 1) and 21 (mode 2)
    double probability = 0.0;
    double fidelity = 0.0;  // against the matching Bell state, up to phase
    int expected_sign = +1; // +: (|HH>+|VV>)/sqrt2, -: (|HH>-|VV>)/sqrt2
};

struct BellReport {
    std::vector<BellBranch> branches;
    double total_probability = 0.0;
    std::vector<FockState> step_states;  // after steps 1..5 (pre-herald)
};

namespace detail {

inline OpticalState bell_input(const Circuit& c) {
    std::vector<std::string> all = c.paths;
    all.push_back("10");
    all.push_back("20");
    OpticalState s(all);
    s.create_photon("1", Pol::H);
    s.create_photon("1", Pol::V);
    s.create_photon("2", Pol::H);
    s.create_photon("2", Pol::V);
    return s;
}

}  // namespace detail

/// Runs the Bell circuit and enumerates every one-photon-per-detector-pair
/// herald branch with its conditional state, fidelity, and probability.
inline BellReport run_bell_circuit() {
    Circuit c = bell_circuit();
    OpticalState s = detail::bell_input(c);
    BellReport report;

    // element counts after which the five step states are recorded
    const std::vector<std::size_t> checkpoints = {2, 4, 9, 11, 15};
    std::size_t next_checkpoint = 0;
    for (std::size_t i = 0; i < c.elements.size(); ++i) {
        Circuit::apply_element(s, c.elements[i]);
        if (next_checkpoint < checkpoints.size() && i + 1 == checkpoints[next_checkpoint]) {
            report.step_states.push_back(s.fock());
            ++next_checkpoint;
        }
    }

    int mode1 = s.path_index("11"), mode2 = s.path_index("21");
    for (int click1 = 0; click1 < 2; ++click1) {
        for (int click2 = 0; click2 < 2; ++click2) {
            HeraldPattern pattern;
            pattern.requirements = {
                {"121", click1 == 0 ? 1 : 0, Pol::H},
                {"122", click1 == 0 ? 0 : 1, Pol::V},
                {"221", click2 == 0 ? 1 : 0, Pol::H},
                {"222", click2 == 0 ? 0 : 1, Pol::V},
            };
            auto [remainder, prob] = herald(s, pattern);
            BellBranch branch;
            branch.herald_121_122 = click1 == 0 ? "H" : "V";
            branch.herald_221_222 = click2 == 0 ? "H" : "V";
            branch.state = remainder;
            branch.probability = prob;
            branch.expected_sign = click1 == click2 ? +1 : -1;
            if (prob > 0.0) {
                // overlap with (|HH> +/- |VV>)/sqrt2 on the two output modes
                FockState hh = vacuum(remainder.spatial_count(), 2);
                hh = apply_creation(hh, mode1, InternalVector::level(2, 0));
                hh = apply_creation(hh, mode2, InternalVector::level(2, 0));
                FockState vv = vacuum(remainder.spatial_count(), 2);
                vv = apply_creation(vv, mode1, InternalVector::level(2, 1));
                vv = apply_creation(vv, mode2, InternalVector::level(2, 1));
                FockState bell =
                    hh.plus(vv.scaled(double(branch.expected_sign))).scaled(1.0 / std::sqrt(2.0));
                branch.fidelity = std::abs(inner_product(bell, remainder)) / std::sqrt(prob);
            }
            report.total_probability += prob;
            report.branches.push_back(std::move(branch));
        }
    }
    return report;
}

}  // namespace sculpt::optics

#endif  // SCULPT_OPTICS_HPP
