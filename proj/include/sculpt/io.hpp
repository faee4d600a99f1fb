#ifndef SCULPT_IO_HPP
#define SCULPT_IO_HPP

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "sculpt/bigraph.hpp"
#include "sculpt/engine.hpp"
#include "sculpt/entangle.hpp"
#include "sculpt/fock.hpp"
#include "sculpt/optics.hpp"
#include "sculpt/search.hpp"

namespace sculpt::io {

using nlohmann::json;

// --- FockState -----------------------------------------------------------

inline json to_json(const FockState& s) {
    json terms = json::array();
    for (const auto& [config, amp] : s.terms()) {
        json occ = json::array();
        for (const auto& [mode, n] : config.entries())
            occ.push_back({mode.spatial, mode.internal, n});
        terms.push_back({{"occ", occ}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return {{"dims", {{"spatial", s.spatial_count()}, {"internal", s.internal_dim()}}},
            {"terms", terms}};
}

inline FockState fock_from_json(const json& j) {
    FockState s(j.at("dims").at("spatial").get<int>(), j.at("dims").at("internal").get<int>());
    for (const auto& term : j.at("terms")) {
        OccupationConfig config;
        for (const auto& entry : term.at("occ")) {
            ModeKey m{entry.at(0).get<int>(), entry.at(1).get<int>()};
            for (int b = 0; b < entry.at(2).get<int>(); ++b) config = config.with_added(m).first;
        }
        s.add_term(config, cplx(term.at("re").get<double>(), term.at("im").get<double>()));
    }
    return s;
}

// --- SculptingOperator ---------------------------------------------------

inline json to_json(const SculptingOperator& op) {
    json factors = json::array();
    for (const auto& f : op.factors) {
        json terms = json::array();
        for (const auto& t : f.terms) {
            json internal = json::array();
            for (const auto& c : t.internal.components())
                internal.push_back({c.real(), c.imag()});
            terms.push_back({{"j", t.spatial},
                             {"re", t.amplitude.real()},
                             {"im", t.amplitude.imag()},
                             {"internal", internal}});
        }
        factors.push_back(terms);
    }
    return {{"N", op.system_modes}, {"K", op.ancilla_modes}, {"d", op.internal_dim},
            {"factors", factors}};
}

inline SculptingOperator operator_from_json(const json& j) {
    SculptingOperator op;
    op.system_modes = j.at("N").get<int>();
    op.ancilla_modes = j.at("K").get<int>();
    op.internal_dim = j.at("d").get<int>();
    for (const auto& factor : j.at("factors")) {
        SubtractionOperator f;
        for (const auto& term : factor) {
            std::vector<cplx> comps;
            for (const auto& c : term.at("internal"))
                comps.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
            f.terms.push_back({term.at("j").get<int>(),
                               cplx(term.at("re").get<double>(), term.at("im").get<double>()),
                               InternalVector(std::move(comps))});
        }
        op.factors.push_back(std::move(f));
    }
    op.validate();
    return op;
}

// --- SculptingBigraph ----------------------------------------------------

inline json color_to_json(const EdgeColor& c, int d) {
    if (c.is_red()) return "RED";
    if (c.is_blue(d)) return "BLUE";
    if (c == EdgeColor::black()) return "BLACK";
    if (c == EdgeColor::dotted()) return "DOTTED";
    if (c.kind == EdgeColor::Kind::Fourier) return {{"fourier", c.index}};
    return {{"level", c.index}};
}

inline EdgeColor color_from_json(const json& j, int d) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "RED") return EdgeColor::red();
        if (s == "BLUE") return EdgeColor::blue(d);
        if (s == "BLACK") return EdgeColor::black();
        if (s == "DOTTED") return EdgeColor::dotted();
        throw std::invalid_argument("unknown edge color: " + s);
    }
    if (j.contains("fourier")) return EdgeColor::fourier(j.at("fourier").get<int>());
    if (j.contains("level")) return EdgeColor::level(j.at("level").get<int>());
    throw std::invalid_argument("malformed edge color");
}

inline json to_json(const SculptingBigraph& g) {
    json dots = json::array();
    for (const auto& dot : g.dots) {
        json edges = json::array();
        for (const auto& e : dot.edges)
            edges.push_back({{"circle", e.circle},
                             {"re", e.amplitude.real()},
                             {"im", e.amplitude.imag()},
                             {"color", color_to_json(e.color, g.internal_dim)}});
        dots.push_back({{"mult", dot.multiplicity}, {"edges", edges}});
    }
    json out = {{"N", g.system_modes}, {"K", g.ancilla_modes}, {"d", g.internal_dim},
                {"dots", dots}};
    if (!g.ancilla_levels.empty()) out["ancilla_levels"] = g.ancilla_levels;
    return out;
}

inline SculptingBigraph graph_from_json(const json& j) {
    SculptingBigraph g;
    g.system_modes = j.at("N").get<int>();
    g.ancilla_modes = j.at("K").get<int>();
    g.internal_dim = j.at("d").get<int>();
    if (j.contains("ancilla_levels"))
        g.ancilla_levels = j.at("ancilla_levels").get<std::vector<int>>();
    for (const auto& dot : j.at("dots")) {
        BigraphDot bd;
        bd.multiplicity = dot.value("mult", 1);
        for (const auto& e : dot.at("edges"))
            bd.edges.push_back({e.at("circle").get<int>(),
                                cplx(e.at("re").get<double>(), e.at("im").get<double>()),
                                color_from_json(e.at("color"), g.internal_dim)});
        g.dots.push_back(std::move(bd));
    }
    g.validate();
    return g;
}

// --- LogicalState --------------------------------------------------------

inline json to_json(const LogicalState& s) {
    json amps = json::array();
    for (const auto& a : s.amps) amps.push_back({a.real(), a.imag()});
    return {{"N", s.parties}, {"d", s.local_dim}, {"amps", amps}};
}

inline LogicalState logical_from_json(const json& j, bool normalize = false) {
    std::vector<cplx> amps;
    for (const auto& a : j.at("amps"))
        amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    return LogicalState::from_amps(j.at("N").get<int>(), j.at("d").get<int>(), std::move(amps),
                                   normalize);
}

// --- optics circuit ------------------------------------------------------

inline json to_json(const optics::Circuit& c) {
    json elements = json::array();
    for (const auto& el : c.elements) {
        if (const auto* hwp = std::get_if<optics::HwpElement>(&el))
            elements.push_back({{"op", "hwp"}, {"path", hwp->path}});
        else if (const auto* pbs = std::get_if<optics::PbsElement>(&el))
            elements.push_back({{"op", "pbs"},
                                {"in", {pbs->in1, pbs->in2}},
                                {"out", {pbs->out1, pbs->out2}}});
        else if (const auto* det = std::get_if<optics::DetectorElement>(&el))
            elements.push_back({{"op", "herald"},
                                {"path", det->path},
                                {"pol", det->pol == optics::Pol::H ? "H" : "V"}});
        else if (const auto* cross = std::get_if<optics::CrossElement>(&el))
            elements.push_back({{"op", "cross"}, {"paths", {cross->a, cross->b}}});
    }
    return elements;
}

inline optics::Circuit circuit_from_json(const json& j, std::vector<std::string> paths) {
    optics::Circuit c;
    c.paths = std::move(paths);
    for (const auto& el : j) {
        const std::string op = el.at("op").get<std::string>();
        if (op == "hwp") c.elements.push_back(optics::HwpElement{el.at("path").get<std::string>()});
        else if (op == "pbs")
            c.elements.push_back(optics::PbsElement{
                el.at("in").at(0).get<std::string>(), el.at("in").at(1).get<std::string>(),
                el.at("out").at(0).get<std::string>(), el.at("out").at(1).get<std::string>()});
        else if (op == "herald")
            c.elements.push_back(optics::DetectorElement{
                el.at("path").get<std::string>(),
                el.value("pol", "H") == "H" ? optics::Pol::H : optics::Pol::V});
        else if (op == "cross")
            c.elements.push_back(optics::CrossElement{el.at("paths").at(0).get<std::string>(),
                                                      el.at("paths").at(1).get<std::string>()});
        else
            throw std::invalid_argument("unknown circuit element: " + op);
    }
    return c;
}

// --- search --------------------------------------------------------------

inline json to_json(const SearchResult& r) {
    return {{"status", to_string(r.status)},
            {"residual", r.residual},
            {"fidelity", r.fidelity},
            {"graph", to_json(r.graph)}};
}

inline json to_json(const EntanglementClass& c) {
    return {{"class", to_string(c.cls)}, {"witnesses", c.witness_bipartitions}};
}

}  // namespace sculpt::io

#endif  // SCULPT_IO_HPP
