#include "semirec/analysis.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace semirec {

namespace {

double json_endpoint(const Json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ConfigError("interval endpoint must be a number, \"inf\" or \"-inf\"");
    }
    if (!j.is_number()) throw ConfigError("interval endpoint must be a number");
    return j.get<double>();
}

const Json& require(const Json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing required key '" + key + "'");
    return j.at(key);
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

Json point_to_json(const Point& p) {
    Json a = Json::array();
    for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
    return a;
}

Json interval_to_json(const Interval& iv) {
    auto endpoint = [](double v) -> Json {
        if (v == kInf) return "inf";
        if (v == -kInf) return "-inf";
        return v;
    };
    return Json::array({endpoint(iv.lo()), endpoint(iv.hi())});
}

Json word_to_json(const GeneratorSystem& sys, const Word& w) {
    Json applied = Json::array();
    for (int g : w.applied) applied.push_back(sys.generator(g).name);
    Json j;
    j["applied"] = applied;
    j["display"] = word_to_string(sys, w);
    return j;
}

Json certificate_to_json(const GeneratorSystem& sys, const InvariantSetCertificate& cert) {
    Json j;
    switch (cert.kind) {
    case CertificateKind::WanderingExclusion: j["kind"] = "wandering-exclusion"; break;
    case CertificateKind::LeadExclusion: j["kind"] = "lead-exclusion"; break;
    case CertificateKind::NoChain: j["kind"] = "no-chain"; break;
    }
    Json set = Json::array();
    for (const auto& part : cert.set_parts) set.push_back(interval_to_json(part));
    j["set"] = set;
    if (!cert.lead.empty()) j["lead"] = word_to_json(sys, cert.lead);
    if (cert.kind == CertificateKind::WanderingExclusion) j["closure_depth"] = cert.closure_depth;
    if (cert.kind != CertificateKind::NoChain) {
        Json probe = Json::array();
        for (int d = 0; d < cert.probe.dim(); ++d) probe.push_back(interval_to_json(cert.probe[d]));
        j["probe"] = probe;
    }
    j["target"] = point_to_json(cert.target);
    if (cert.target_radius > 0) j["target_radius"] = cert.target_radius;
    if (cert.epsilon > 0) j["epsilon"] = cert.epsilon;
    j["separation"] = cert.separation;
    return j;
}

} // namespace

Json verdict_to_json(const GeneratorSystem& sys, const Verdict& v) {
    Json j;
    j["status"] = to_string(v.status);
    j["note"] = v.note;
    if (!v.budgets.empty()) j["budgets"] = v.budgets;
    if (!v.witness_points.empty()) {
        Json pts = Json::array();
        for (const auto& p : v.witness_points) pts.push_back(point_to_json(p));
        j["witness_points"] = pts;
    }
    if (!v.witness_words.empty()) {
        Json ws = Json::array();
        for (const auto& w : v.witness_words) ws.push_back(word_to_json(sys, w));
        j["witness_words"] = ws;
    }
    if (v.certificate) j["certificate"] = certificate_to_json(sys, *v.certificate);
    return j;
}

Json chain_to_json(const GeneratorSystem& sys, const EpsilonChain& chain) {
    Json j;
    Json pts = Json::array();
    for (const auto& p : chain.points) pts.push_back(point_to_json(p));
    j["points"] = pts;
    Json hs = Json::array();
    for (const auto& h : chain.helpers) hs.push_back(word_to_json(sys, h));
    j["helpers"] = hs;
    j["lead"] = word_to_json(sys, chain.lead);
    j["epsilon"] = chain.epsilon;
    return j;
}

PhaseSpace space_from_json(const Json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "circle") return PhaseSpace::circle();
    if (kind != "box") throw ConfigError("space kind must be \"box\" or \"circle\"");
    const Json& bounds = require(j, "bounds");
    if (!bounds.is_array() || bounds.empty() || bounds.size() > kMaxDim)
        throw ConfigError("space bounds must be an array of 1 or 2 [lo, hi] pairs");
    auto make_interval = [](const Json& pair) {
        if (!pair.is_array() || pair.size() != 2) throw ConfigError("bounds entries are [lo, hi]");
        return Interval{json_endpoint(pair.at(0)), json_endpoint(pair.at(1))};
    };
    if (bounds.size() == 1) return PhaseSpace::box(IntervalBox(make_interval(bounds.at(0))));
    return PhaseSpace::box(IntervalBox(make_interval(bounds.at(0)), make_interval(bounds.at(1))));
}

GeneratorSystem system_from_json(const Json& j) {
    const PhaseSpace space = space_from_json(require(j, "space"));
    const Json& gens = require(j, "generators");
    if (!gens.is_array() || gens.empty()) throw ConfigError("need a nonempty generators array");
    std::vector<Generator> generators;
    for (const auto& g : gens) {
        const std::string name = require(g, "name").get<std::string>();
        const Json& map = require(g, "map");
        std::vector<std::string> comps;
        if (map.is_string()) comps.push_back(map.get<std::string>());
        else if (map.is_array())
            for (const auto& c : map) comps.push_back(c.get<std::string>());
        else throw ConfigError("generator map must be a string or an array of strings");
        try {
            generators.push_back(Generator{name, MapExpr::parse_map(comps, space.dim())});
        } catch (const ParseError& e) {
            throw ConfigError("generator '" + name + "': " + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("generator '" + name + "': " + e.what());
        }
    }
    try {
        return GeneratorSystem(space, std::move(generators), get_or(j, "claimed_abelian", false));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Grid grid_from_json(const Json& j, const PhaseSpace& space, int max_cells) {
    const Json& cells = require(j, "cells");
    if (!cells.is_array()) throw ConfigError("grid cells must be an array of per-axis counts");
    std::vector<int> counts;
    for (const auto& c : cells) counts.push_back(c.get<int>());
    try {
        Grid g(space, counts);
        if (g.cell_count() > max_cells)
            throw BudgetError("grid has " + std::to_string(g.cell_count()) +
                              " cells, above the cap of " + std::to_string(max_cells));
        return g;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Point point_from_json(const Json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ConfigError("points are arrays with one entry per dimension");
    Point p = Point::zero(dim);
    for (int i = 0; i < dim; ++i) p[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    return p;
}

Word word_from_json(const Json& j, const GeneratorSystem& sys) {
    std::vector<std::string> names;
    if (j.is_string()) names.push_back(j.get<std::string>());
    else if (j.is_array())
        for (const auto& n : j) names.push_back(n.get<std::string>());
    else throw ConfigError("words are a generator name or an array of names in application order");
    Word w;
    for (const auto& n : names) {
        const int idx = sys.index_of(n);
        if (idx < 0) throw ConfigError("unknown generator '" + n + "'");
        w.applied.push_back(idx);
    }
    return w;
}

std::vector<Interval> interval_union_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("a set is a nonempty array of [lo, hi] pairs");
    std::vector<Interval> parts;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2) throw ConfigError("set entries are [lo, hi]");
        parts.emplace_back(json_endpoint(pair.at(0)), json_endpoint(pair.at(1)));
    }
    return parts;
}

// ---------------------------------------------------------------------------
// Per-analysis runners.
// ---------------------------------------------------------------------------

namespace {

int pivot_from_json(const Json& a, const GeneratorSystem& sys) {
    const std::string name = require(a, "pivot").get<std::string>();
    const int pivot = sys.index_of(name);
    if (pivot < 0) throw ConfigError("unknown pivot generator '" + name + "'");
    return pivot;
}

Json run_orbit(const GeneratorSystem& sys, const Json& a) {
    const Point x = point_from_json(require(a, "x"), sys.space().dim());
    const int max_len = get_or(a, "max_len", 8);
    const double tol = get_or(a, "tol_dedup", 1e-9);
    const OrbitResult r = orbit(sys, x, max_len, tol);
    Json out;
    out["entries"] = Json::array();
    for (const auto& e : r.entries) {
        Json entry;
        entry["value"] = point_to_json(e.value);
        entry["witness"] = word_to_json(sys, e.witness);
        out["entries"].push_back(entry);
    }
    out["words_evaluated"] = r.words_evaluated;
    out["escaped_words"] = r.escaped_words;
    out["budgets"] = "words up to length " + std::to_string(max_len) + ", dedup tolerance " +
                     std::to_string(tol);
    return out;
}

Json run_fix(const GeneratorSystem& sys, const Json& a) {
    const int resolution = get_or(a, "resolution", 10000);
    Json out;
    out["points"] = Json::array();
    for (const auto& p : fix_set(sys, resolution)) out["points"].push_back(point_to_json(p));
    out["budgets"] = "scan resolution " + std::to_string(resolution);
    return out;
}

Json run_orbit_points(const GeneratorSystem& sys, const Json& a) {
    const int max_len = get_or(a, "max_len", 3);
    const int resolution = get_or(a, "resolution", 10000);
    const OrbitPointsResult r = orbit_points(sys, max_len, resolution);
    Json out;
    out["records"] = Json::array();
    for (const auto& rec : r.records) {
        Json jr;
        jr["point"] = point_to_json(rec.point);
        jr["witness"] = word_to_json(sys, rec.witness);
        jr["residual"] = rec.residual;
        out["records"].push_back(jr);
    }
    out["identity_like_words"] = Json::array();
    for (const auto& w : r.identity_like_words)
        out["identity_like_words"].push_back(word_to_json(sys, w));
    out["skipped_subintervals"] = r.skipped_subintervals;
    out["budgets"] = "words up to length " + std::to_string(max_len) + ", scan resolution " +
                     std::to_string(resolution);
    return out;
}

Json run_omega(const GeneratorSystem& sys, const Json& a) {
    const Point x = point_from_json(require(a, "x"), sys.space().dim());
    const int pivot = pivot_from_json(a, sys);
    const std::vector<int> schedule = get_or(a, "schedule", std::vector<int>{3, 5, 8});
    OmegaOptions opts;
    opts.block_cap = get_or(a, "block_cap", 2);
    opts.tol_cluster = get_or(a, "tol_cluster", kTolCluster);
    const OmegaApprox r = omega_limit(sys, x, pivot, schedule, opts);
    Json out;
    out["clusters"] = Json::array();
    for (const auto& c : r.clusters) {
        Json jc;
        jc["center"] = point_to_json(c.center);
        jc["hits"] = c.hits;
        jc["max_pivot_count"] = c.max_count;
        jc["counts_hit"] = c.counts_hit;
        jc["persistent"] = c.persistent;
        out["clusters"].push_back(jc);
    }
    int persistent = 0;
    for (const auto& c : r.clusters) persistent += c.persistent;
    out["persistent_count"] = persistent;
    out["words_evaluated"] = r.words_evaluated;
    out["escaped_words"] = r.escaped_words;
    std::ostringstream b;
    b << "pivot " << sys.generator(pivot).name << ", block cap " << opts.block_cap
      << ", cluster tolerance " << opts.tol_cluster;
    out["budgets"] = b.str();
    return out;
}

Json run_recurrent(const GeneratorSystem& sys, const Json& a) {
    const Point x = point_from_json(require(a, "x"), sys.space().dim());
    const int pivot = pivot_from_json(a, sys);
    RecurrenceBudgets budgets;
    budgets.schedule = get_or(a, "schedule", budgets.schedule);
    budgets.block_cap = get_or(a, "block_cap", budgets.block_cap);
    budgets.tol = get_or(a, "tol", budgets.tol);
    std::optional<Word> hint;
    if (a.contains("hint")) hint = word_from_json(a.at("hint"), sys);
    Json out;
    out["verdict"] = verdict_to_json(sys, is_recurrent(sys, x, pivot, budgets, hint));
    return out;
}

Json sweep_to_json(const GeneratorSystem& sys, const Grid& grid, const CellSweepResult& sweep) {
    Json out;
    out["cells"] = Json::array();
    int yes = 0, no = 0, inconclusive = 0;
    for (int c = 0; c < grid.cell_count(); ++c) {
        const Verdict& v = sweep.cells[static_cast<std::size_t>(c)];
        Json jc;
        jc["cell"] = c;
        jc["center"] = point_to_json(grid.center_of_flat(c));
        jc["status"] = to_string(v.status);
        if (!v.witness_words.empty()) jc["witness"] = word_to_string(sys, v.witness_words.front());
        out["cells"].push_back(jc);
        yes += v.status == Status::CertifiedYes;
        no += v.status == Status::CertifiedNo;
        inconclusive += v.status == Status::Inconclusive;
    }
    out["radius"] = sweep.radius_used;
    out["counts"] = Json{{"certified-yes", yes}, {"certified-no", no}, {"inconclusive", inconclusive}};
    return out;
}

Json run_nonwandering(const GeneratorSystem& sys, const Json& a, int max_cells) {
    const int max_len = get_or(a, "max_len", 4);
    ProbeOptions opts;
    opts.samples_per_axis = get_or(a, "samples_per_axis", opts.samples_per_axis);
    if (a.contains("sets"))
        for (const auto& s : a.at("sets")) opts.candidate_sets.push_back(interval_union_from_json(s));
    Json out;
    if (a.contains("x")) {
        const Point x = point_from_json(a.at("x"), sys.space().dim());
        const double radius = require(a, "radius").get<double>();
        const int levels = get_or(a, "radius_levels", 1);
        Json per_radius = Json::array();
        double r = radius;
        for (int level = 0; level < levels; ++level, r /= 2) {
            Json jr;
            jr["radius"] = r;
            jr["verdict"] = verdict_to_json(sys, is_nonwandering(sys, x, r, max_len, opts));
            per_radius.push_back(jr);
        }
        out["point"] = point_to_json(x);
        out["per_radius"] = per_radius;
    } else {
        const Grid grid = grid_from_json(require(a, "grid"), sys.space(), max_cells);
        out["sweep"] = sweep_to_json(sys, grid, nonwandering_cells(sys, grid, max_len, opts));
    }
    out["budgets"] = "composite words up to length " + std::to_string(max_len);
    return out;
}

Json run_snw(const GeneratorSystem& sys, const Json& a, int max_cells) {
    const int lead_max_len = get_or(a, "lead_max_len", 2);
    const int helper_max_len = get_or(a, "helper_max_len", 2);
    ProbeOptions opts;
    opts.samples_per_axis = get_or(a, "samples_per_axis", opts.samples_per_axis);
    if (a.contains("sets"))
        for (const auto& s : a.at("sets")) opts.candidate_sets.push_back(interval_union_from_json(s));
    Json out;
    if (a.contains("x")) {
        const Point x = point_from_json(a.at("x"), sys.space().dim());
        const double radius = require(a, "radius").get<double>();
        out["point"] = point_to_json(x);
        out["verdict"] = verdict_to_json(
            sys, is_strongly_nonwandering(sys, x, radius, lead_max_len, helper_max_len, opts));
    } else {
        const Grid grid = grid_from_json(require(a, "grid"), sys.space(), max_cells);
        out["sweep"] = sweep_to_json(
            sys, grid, strongly_nonwandering_cells(sys, grid, lead_max_len, helper_max_len, opts));
    }
    out["budgets"] = "leads up to length " + std::to_string(lead_max_len) +
                     ", helpers up to length " + std::to_string(helper_max_len);
    return out;
}

Json run_chain_graph(const GeneratorSystem& sys, const Json& a, int max_cells) {
    const Grid grid = grid_from_json(require(a, "grid"), sys.space(), max_cells);
    const Word lead = word_from_json(require(a, "lead"), sys);
    const double epsilon = require(a, "epsilon").get<double>();
    const int helper_max_len = get_or(a, "helper_max_len", 3);
    const ChainGraph g = build_chain_graph(sys, grid, lead, epsilon, helper_max_len);
    const ChainClassification cls = classify(g);

    Json out;
    out["cells"] = grid.cell_count();
    out["edges"] = g.edge_count();
    out["epsilon"] = epsilon;
    out["lead"] = word_to_json(sys, lead);

    Json on_cycle = Json::array();
    for (int c = 0; c < grid.cell_count(); ++c)
        if (cls.on_cycle[static_cast<std::size_t>(c)]) on_cycle.push_back(c);
    out["on_cycle_cells"] = on_cycle;

    if (get_or(a, "export_edges", false)) {
        Json edges = Json::array();
        for (int u = 0; u < g.node_count(); ++u)
            for (const auto& e : g.adj[static_cast<std::size_t>(u)]) {
                Json je;
                je["src"] = u;
                je["dst"] = e.to;
                je["witness"] = word_to_string(sys, e.helper);
                edges.push_back(je);
            }
        out["edge_list"] = edges;
    }

    if (a.contains("queries")) {
        ChainQueryOptions qopts;
        if (a.contains("sets"))
            for (const auto& s : a.at("sets"))
                qopts.candidate_sets.push_back(interval_union_from_json(s));
        Json queries = Json::array();
        for (const auto& q : a.at("queries")) {
            const Point from = point_from_json(require(q, "from"), sys.space().dim());
            const Point to = point_from_json(require(q, "to"), sys.space().dim());
            const ChainQueryResult r = chain_exists(sys, g, from, to, qopts);
            Json jq;
            jq["from"] = point_to_json(from);
            jq["to"] = point_to_json(to);
            jq["verdict"] = verdict_to_json(sys, r.verdict);
            if (r.chain) jq["chain"] = chain_to_json(sys, *r.chain);
            queries.push_back(jq);
        }
        out["queries"] = queries;
    }
    return out;
}

Json run_chain_recurrent(const GeneratorSystem& sys, const Json& a, int max_cells) {
    const Grid grid = grid_from_json(require(a, "grid"), sys.space(), max_cells);
    const int lead_max_len = get_or(a, "lead_max_len", 2);
    const std::vector<double> epsilons = require(a, "epsilons").get<std::vector<double>>();
    const int helper_max_len = get_or(a, "helper_max_len", 3);
    const ChainRecurrenceSweep sweep =
        chain_recurrent_cells(sys, grid, lead_max_len, epsilons, helper_max_len);
    Json out;
    Json cells = Json::array();
    int cr = 0;
    for (int c = 0; c < grid.cell_count(); ++c) {
        Json jc;
        jc["cell"] = c;
        jc["center"] = point_to_json(grid.center_of_flat(c));
        jc["cr_up_to_budget"] = static_cast<bool>(sweep.cr_up_to_budget[static_cast<std::size_t>(c)]);
        if (!sweep.cr_up_to_budget[static_cast<std::size_t>(c)])
            jc["first_failure"] = sweep.first_failure[static_cast<std::size_t>(c)];
        cells.push_back(jc);
        cr += sweep.cr_up_to_budget[static_cast<std::size_t>(c)];
    }
    out["cells"] = cells;
    out["cr_count"] = cr;
    std::ostringstream b;
    b << sweep.lead_words << " lead words, epsilons {";
    for (std::size_t i = 0; i < epsilons.size(); ++i) b << (i ? "," : "") << epsilons[i];
    b << "}, helpers up to length " << helper_max_len << "; the paper-level quantifier over all "
      << "epsilon and all leads is truncated to this budget";
    out["budgets"] = b.str();
    return out;
}

Json run_chain_equivalent(const GeneratorSystem& sys, const Json& a, int max_cells) {
    const Grid grid = grid_from_json(require(a, "grid"), sys.space(), max_cells);
    const Point pa = point_from_json(require(a, "a"), sys.space().dim());
    const Point pb = point_from_json(require(a, "b"), sys.space().dim());
    const int lead_max_len = get_or(a, "lead_max_len", 2);
    const std::vector<double> epsilons = require(a, "epsilons").get<std::vector<double>>();
    const int helper_max_len = get_or(a, "helper_max_len", 3);
    ChainQueryOptions qopts;
    if (a.contains("sets"))
        for (const auto& s : a.at("sets")) qopts.candidate_sets.push_back(interval_union_from_json(s));
    const ChainEquivalenceResult r =
        chain_equivalent(sys, grid, pa, pb, lead_max_len, epsilons, helper_max_len, qopts);
    Json out;
    out["a"] = point_to_json(pa);
    out["b"] = point_to_json(pb);
    out["verdict"] = verdict_to_json(sys, r.verdict);
    if (r.forward) out["forward_chain"] = chain_to_json(sys, *r.forward);
    if (r.backward) out["backward_chain"] = chain_to_json(sys, *r.backward);
    return out;
}

Json run_no_chain_cert(const GeneratorSystem& sys, const Json& a) {
    const Point pa = point_from_json(require(a, "a"), sys.space().dim());
    const Word lead = word_from_json(require(a, "lead"), sys);
    const double epsilon = require(a, "epsilon").get<double>();
    std::optional<std::vector<Interval>> user_set;
    if (a.contains("set")) user_set = interval_union_from_json(a.at("set"));
    const NoChainResult r = certify_no_chain(sys, pa, lead, epsilon, user_set);
    Json out;
    out["verdict"] = verdict_to_json(sys, r.verdict);
    return out;
}

std::vector<int> cells_of_points(const Grid& grid, const std::vector<Point>& pts) {
    std::vector<int> out;
    for (const auto& p : pts) {
        try {
            out.push_back(grid.flat_cell_of(p));
        } catch (const DomainError&) {
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> yes_cells(const CellSweepResult& sweep) {
    std::vector<int> out;
    for (std::size_t c = 0; c < sweep.cells.size(); ++c)
        if (sweep.cells[c].status == Status::CertifiedYes) out.push_back(static_cast<int>(c));
    return out;
}

std::vector<int> cr_cells(const ChainRecurrenceSweep& sweep) {
    std::vector<int> out;
    for (std::size_t c = 0; c < sweep.cr_up_to_budget.size(); ++c)
        if (sweep.cr_up_to_budget[c]) out.push_back(static_cast<int>(c));
    return out;
}

Json match_to_json(const SetMatchReport& m) {
    Json j;
    j["match"] = m.match;
    j["dilation"] = m.dilation;
    j["only_in_transported"] = m.only_in_a;
    j["only_in_target"] = m.only_in_b;
    j["transported_count"] = m.a_count;
    j["target_count"] = m.b_count;
    return j;
}

Json run_conjugacy(const GeneratorSystem& sys, const Json& a, std::uint64_t seed, int max_cells) {
    const GeneratorSystem target = system_from_json(require(a, "target"));
    ConjugacyMap cmap{MapExpr{}, MapExpr{}, sys.space(), target.space(), {}};
    try {
        std::vector<std::string> rho_comp, rho_inv_comp;
        const Json& rho = require(a, "rho");
        const Json& rho_inv = require(a, "rho_inv");
        if (rho.is_string()) rho_comp.push_back(rho.get<std::string>());
        else for (const auto& c : rho) rho_comp.push_back(c.get<std::string>());
        if (rho_inv.is_string()) rho_inv_comp.push_back(rho_inv.get<std::string>());
        else for (const auto& c : rho_inv) rho_inv_comp.push_back(c.get<std::string>());
        cmap.rho = MapExpr::parse_map(rho_comp, sys.space().dim());
        cmap.rho_inv = MapExpr::parse_map(rho_inv_comp, target.space().dim());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("conjugacy map: ") + e.what());
    }

    const Json& pairing = require(a, "pairing");
    cmap.pairing.assign(static_cast<std::size_t>(sys.generator_count()), -1);
    for (const auto& [src_name, dst_name] : pairing.items()) {
        const int si = sys.index_of(src_name);
        const int ti = target.index_of(dst_name.get<std::string>());
        if (si < 0 || ti < 0) throw ConfigError("pairing references an unknown generator");
        cmap.pairing[static_cast<std::size_t>(si)] = ti;
    }
    for (int t : cmap.pairing)
        if (t < 0) throw ConfigError("pairing must cover every source generator");

    const int samples = get_or(a, "samples", 1000);
    const double tol = get_or(a, "tol", kTolConj);
    const ConjugacyCheckResult check = check_conjugacy(sys, target, cmap, samples, seed, tol);

    Json out;
    Json jc;
    jc["verdict"] = verdict_to_json(sys, check.verdict);
    jc["max_generator_residual"] = check.max_generator_residual;
    jc["max_inverse_residual"] = check.max_inverse_residual;
    jc["max_word_residual"] = check.max_word_residual;
    jc["samples_used"] = check.samples_used;
    jc["note"] = "on a compact window every continuous conjugacy is uniformly continuous, so the "
                 "uniformity hypothesis for chain transport holds automatically";
    out["check"] = jc;

    if (check.verdict.status == Status::CertifiedNo || !a.contains("compare")) return out;

    const int dilation = get_or(a, "dilation", 1);
    Json comparisons = Json::array();
    for (const auto& cmp : a.at("compare")) {
        const std::string kind = require(cmp, "kind").get<std::string>();
        const Grid src_grid = grid_from_json(require(cmp, "grid"), sys.space(), max_cells);
        const Grid dst_grid = cmp.contains("target_grid")
                                  ? grid_from_json(cmp.at("target_grid"), target.space(), max_cells)
                                  : grid_from_json(require(cmp, "grid"), target.space(), max_cells);
        std::vector<int> src_cells, dst_cells;
        TransportResult transported;
        if (kind == "orbit-points") {
            const int max_len = get_or(cmp, "max_len", 2);
            const int resolution = get_or(cmp, "resolution", 4000);
            std::vector<Point> src_pts, dst_pts;
            for (const auto& rec : orbit_points(sys, max_len, resolution).records)
                src_pts.push_back(rec.point);
            for (const auto& rec : orbit_points(target, max_len, resolution).records)
                dst_pts.push_back(rec.point);
            src_cells = cells_of_points(src_grid, src_pts);
            dst_cells = cells_of_points(dst_grid, dst_pts);
            transported = transport_points(cmap, src_pts, dst_grid);
        } else if (kind == "nonwandering") {
            const int max_len = get_or(cmp, "max_len", 8);
            ProbeOptions popts;
            popts.samples_per_axis = get_or(cmp, "samples_per_axis", 9);
            src_cells = yes_cells(nonwandering_cells(sys, src_grid, max_len, popts));
            dst_cells = yes_cells(nonwandering_cells(target, dst_grid, max_len, popts));
            transported = transport_cells(cmap, src_grid, src_cells, dst_grid);
        } else if (kind == "chain-recurrent") {
            const int lead_max_len = get_or(cmp, "lead_max_len", 1);
            const std::vector<double> epsilons =
                get_or(cmp, "epsilons", std::vector<double>{0.1});
            const int helper_max_len = get_or(cmp, "helper_max_len", 2);
            src_cells = cr_cells(
                chain_recurrent_cells(sys, src_grid, lead_max_len, epsilons, helper_max_len));
            dst_cells = cr_cells(
                chain_recurrent_cells(target, dst_grid, lead_max_len, epsilons, helper_max_len));
            transported = transport_cells(cmap, src_grid, src_cells, dst_grid);
        } else {
            throw ConfigError("unknown comparison kind '" + kind + "'");
        }
        Json jm;
        jm["kind"] = kind;
        jm["source_cells"] = src_cells;
        jm["transported_cells"] = transported.cells;
        jm["target_cells"] = dst_cells;
        jm["escaped_points"] = transported.escaped_points;
        jm["match"] = match_to_json(compare_cell_sets(dst_grid, transported.cells, dst_cells, dilation));
        comparisons.push_back(jm);
    }
    out["comparisons"] = comparisons;
    return out;
}

Json run_analysis(const GeneratorSystem& sys, const Json& a, std::uint64_t seed, int max_cells) {
    const std::string kind = require(a, "kind").get<std::string>();
    if (kind == "orbit") return run_orbit(sys, a);
    if (kind == "fix") return run_fix(sys, a);
    if (kind == "orbit-points") return run_orbit_points(sys, a);
    if (kind == "omega") return run_omega(sys, a);
    if (kind == "recurrent") return run_recurrent(sys, a);
    if (kind == "nonwandering") return run_nonwandering(sys, a, max_cells);
    if (kind == "snw") return run_snw(sys, a, max_cells);
    if (kind == "chain-graph") return run_chain_graph(sys, a, max_cells);
    if (kind == "chain-recurrent") return run_chain_recurrent(sys, a, max_cells);
    if (kind == "chain-equivalent") return run_chain_equivalent(sys, a, max_cells);
    if (kind == "no-chain-cert") return run_no_chain_cert(sys, a);
    if (kind == "conjugacy") return run_conjugacy(sys, a, seed, max_cells);
    throw ConfigError("unknown analysis kind '" + kind + "'");
}

} // namespace

void validate_config(const Json& config, const RunOptions& opts) {
    const GeneratorSystem sys = system_from_json(config);
    std::set<std::string> ids;
    if (config.contains("analyses")) {
        if (!config.at("analyses").is_array()) throw ConfigError("analyses must be an array");
        for (const auto& a : config.at("analyses")) {
            const std::string id = require(a, "id").get<std::string>();
            if (!ids.insert(id).second) throw ConfigError("duplicate analysis id '" + id + "'");
            const std::string kind = require(a, "kind").get<std::string>();
            static const std::set<std::string> kinds{
                "orbit", "fix", "orbit-points", "omega", "recurrent", "nonwandering",
                "snw", "chain-graph", "chain-recurrent", "chain-equivalent", "no-chain-cert",
                "conjugacy"};
            if (!kinds.count(kind)) throw ConfigError("unknown analysis kind '" + kind + "'");
            if (a.contains("grid")) grid_from_json(a.at("grid"), sys.space(), opts.max_cells);
        }
    }
}

Json analyze_config(const Json& config, const RunOptions& opts) {
    validate_config(config, opts);
    const GeneratorSystem sys = system_from_json(config);
    std::uint64_t seed = get_or(config, "seed", static_cast<std::uint64_t>(0));
    if (opts.seed_override) seed = *opts.seed_override;

    Json report;
    report["tool"] = "semirec";
    report["version"] = "0.1.0";
    Json config_echo = config;
    config_echo["seed"] = seed;
    report["config"] = config_echo;
    report["results"] = Json::array();

    Json timing;
    const auto t0 = std::chrono::steady_clock::now();
    if (config.contains("analyses")) {
        for (const auto& a : config.at("analyses")) {
            const auto ta = std::chrono::steady_clock::now();
            Json result;
            result["id"] = require(a, "id").get<std::string>();
            result["kind"] = require(a, "kind").get<std::string>();
            Json body = run_analysis(sys, a, seed, opts.max_cells);
            for (auto& [k, v] : body.items()) result[k] = v;
            report["results"].push_back(result);
            const auto tb = std::chrono::steady_clock::now();
            timing[result["id"].get<std::string>()] =
                std::chrono::duration_cast<std::chrono::milliseconds>(tb - ta).count();
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    timing["total_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    report["timing"] = timing;
    return report;
}

// ---------------------------------------------------------------------------
// CSV emission.
// ---------------------------------------------------------------------------

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void point_columns(const Json& pt, std::ostringstream& os) {
    for (const auto& c : pt) os << "," << c.get<double>();
}

std::string sweep_csv(const Json& sweep, double radius) {
    std::ostringstream os;
    const Json& cells = sweep.at("cells");
    const bool two_d = !cells.empty() && cells.front().at("center").size() == 2;
    os << "cell,x_center" << (two_d ? ",y_center" : "") << ",status,witness_word,radius\n";
    for (const auto& c : cells) {
        os << c.at("cell").get<int>();
        point_columns(c.at("center"), os);
        os << "," << c.at("status").get<std::string>() << ","
           << csv_escape(c.contains("witness") ? c.at("witness").get<std::string>() : "") << ","
           << radius << "\n";
    }
    return os.str();
}

} // namespace

std::string plot_csv(const Json& report, const std::string& analysis_id) {
    const Json* found = nullptr;
    for (const auto& r : report.at("results"))
        if (r.at("id").get<std::string>() == analysis_id) {
            found = &r;
            break;
        }
    if (!found) throw ConfigError("no analysis with id '" + analysis_id + "' in the report");
    const Json& r = *found;
    const std::string kind = r.at("kind").get<std::string>();
    std::ostringstream os;

    if (kind == "orbit") {
        const bool two_d = r.at("entries").empty()
                               ? false
                               : r.at("entries").front().at("value").size() == 2;
        os << "index,x" << (two_d ? ",y" : "") << ",witness\n";
        int i = 0;
        for (const auto& e : r.at("entries")) {
            os << i++;
            point_columns(e.at("value"), os);
            os << "," << csv_escape(e.at("witness").at("display").get<std::string>()) << "\n";
        }
        return os.str();
    }
    if (kind == "fix") {
        os << "x\n";
        for (const auto& p : r.at("points")) os << p.at(0).get<double>() << "\n";
        return os.str();
    }
    if (kind == "orbit-points") {
        os << "x,residual,witness\n";
        for (const auto& rec : r.at("records"))
            os << rec.at("point").at(0).get<double>() << "," << rec.at("residual").get<double>()
               << "," << csv_escape(rec.at("witness").at("display").get<std::string>()) << "\n";
        return os.str();
    }
    if (kind == "omega") {
        os << "cluster_center,hits,max_pivot_count,persistent\n";
        for (const auto& c : r.at("clusters"))
            os << c.at("center").at(0).get<double>() << "," << c.at("hits").get<int>() << ","
               << c.at("max_pivot_count").get<int>() << "," << (c.at("persistent").get<bool>() ? 1 : 0)
               << "\n";
        return os.str();
    }
    if (kind == "nonwandering" || kind == "snw") {
        if (!r.contains("sweep")) throw ConfigError("analysis '" + analysis_id + "' has no cell sweep");
        return sweep_csv(r.at("sweep"), r.at("sweep").at("radius").get<double>());
    }
    if (kind == "chain-recurrent") {
        os << "cell,x_center,status\n";
        for (const auto& c : r.at("cells"))
            os << c.at("cell").get<int>() << "," << c.at("center").at(0).get<double>() << ","
               << (c.at("cr_up_to_budget").get<bool>() ? "cr-up-to-budget" : "not-cr") << "\n";
        return os.str();
    }
    if (kind == "chain-graph") {
        if (r.contains("edge_list")) {
            os << "src,dst,witness\n";
            for (const auto& e : r.at("edge_list"))
                os << e.at("src").get<int>() << "," << e.at("dst").get<int>() << ","
                   << csv_escape(e.at("witness").get<std::string>()) << "\n";
            return os.str();
        }
        if (r.contains("queries")) {
            os << "step,x_i,word\n";
            for (const auto& q : r.at("queries")) {
                if (!q.contains("chain")) continue;
                const Json& chain = q.at("chain");
                int step = 0;
                for (const auto& p : chain.at("points")) {
                    std::string word;
                    if (step > 0)
                        word = chain.at("helpers")
                                   .at(static_cast<std::size_t>(step - 1))
                                   .at("display")
                                   .get<std::string>();
                    os << step << "," << p.at(0).get<double>() << "," << csv_escape(word) << "\n";
                    ++step;
                }
            }
            return os.str();
        }
        throw ConfigError("chain-graph analysis has neither edges nor query chains to plot");
    }
    throw ConfigError("no CSV schema for analysis kind '" + kind + "'");
}

} // namespace semirec
