#include "weilspin/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace weilspin {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

Rational json_rational(const json& j, const std::string& path) {
    try {
        if (j.is_number_integer()) return Rational(static_cast<long>(j.get<int64_t>()));
        if (j.is_string()) return rational_from_string(j.get<std::string>());
    } catch (...) {
    }
    throw ConfigError(path + ": expected an integer or a \"p/q\" string");
}

ordered tower_json(const TowerElt& x) {
    return ordered::array({rational_to_string(x.a), rational_to_string(x.b),
                           rational_to_string(x.c), rational_to_string(x.d)});
}

TowerElt tower_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) throw ConfigError(path + ": expected 4 coordinates");
    return TowerElt(json_rational(j[0], path), json_rational(j[1], path),
                    json_rational(j[2], path), json_rational(j[3], path));
}

}  // namespace

std::string multivector_json(const Multivector& x) {
    ordered arr = ordered::array();
    for (const auto& t : x.terms()) {
        ordered term;
        term["mask"] = t.mask;
        term["coeff"] = tower_json(t.coeff);
        arr.push_back(term);
    }
    return arr.dump();
}

Multivector multivector_from_json_text(const std::string& text, int rank) {
    json j = json::parse(text);
    std::vector<Multivector::Term> terms;
    for (const auto& t : j)
        terms.push_back({t.at("mask").get<Mask>(), tower_from_json(t.at("coeff"), "terms")});
    return Multivector::from_terms(rank, std::move(terms));
}

JobConfig load_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    JobConfig cfg;
    if (!j.contains("field") || !j["field"].is_object())
        throw ConfigError("field: required object with t and q");
    const auto& f = j["field"];
    if (!f.contains("t") || !f["t"].is_number_integer())
        throw ConfigError("field.t: required integer");
    cfg.field.t = f["t"].get<long>();
    if (!f.contains("q")) throw ConfigError("field.q: required");
    cfg.field.q = json_rational(f["q"], "field.q");
    cfg.field.validate();

    if (j.contains("rank_d")) {
        if (!j["rank_d"].is_number_integer()) throw ConfigError("rank_d: expected integer");
        cfg.rank_d = j["rank_d"].get<int>();
    }
    if (cfg.rank_d < 2 || cfg.rank_d % 2) throw ConfigError("rank_d: must be even and >= 2");

    if (j.contains("theta")) {
        if (j["theta"].is_string()) {
            if (j["theta"] != "darboux") throw ConfigError("theta: unknown named choice");
        } else if (j["theta"].is_array()) {
            cfg.theta_darboux = false;
            for (size_t i = 0; i < j["theta"].size(); ++i) {
                std::vector<TowerElt> row;
                for (size_t k = 0; k < j["theta"][i].size(); ++k) {
                    const auto& cell = j["theta"][i][k];
                    if (!cell.is_array() || cell.size() != 2)
                        throw ConfigError("theta: entries are [a, b] pairs over F");
                    row.push_back(TowerElt::from_f(json_rational(cell[0], "theta"),
                                                   json_rational(cell[1], "theta")));
                }
                cfg.theta_matrix.push_back(std::move(row));
            }
        } else {
            throw ConfigError("theta: expected \"darboux\" or a matrix");
        }
    }

    if (j.contains("unit_f")) {
        const auto& u = j["unit_f"];
        if (!u.is_array() || u.size() != 2) throw ConfigError("unit_f: expected [a, b]");
        cfg.unit_f = TowerElt::from_f(json_rational(u[0], "unit_f"), json_rational(u[1], "unit_f"));
    }
    if (cfg.unit_f.is_zero()) throw ConfigError("unit_f: must be non-zero");

    auto parse_class = [&](const char* key, std::string& named, Multivector& terms,
                           bool& is_named) {
        if (!j.contains("classes") || !j["classes"].contains(key)) return;
        const auto& c = j["classes"][key];
        if (c.is_string()) {
            named = c.get<std::string>();
            if (named != "alpha0" && named != "betaprime")
                throw ConfigError(std::string("classes.") + key + ": unknown named class");
            is_named = true;
        } else if (c.is_array()) {
            is_named = false;
            int h = cfg.rank_d * cfg.field.e() / 2;
            std::vector<Multivector::Term> tl;
            for (const auto& t : c)
                tl.push_back({t.at("mask").get<Mask>(),
                              tower_from_json(t.at("coeff"), std::string("classes.") + key)});
            terms = Multivector::from_terms(h, std::move(tl));
        } else {
            throw ConfigError(std::string("classes.") + key + ": expected name or term list");
        }
    };
    parse_class("alpha", cfg.alpha_named, cfg.alpha_terms, cfg.alpha_is_named);
    parse_class("beta", cfg.beta_named, cfg.beta_terms, cfg.beta_is_named);

    if (j.contains("checks")) {
        auto names = suite_family_names();
        for (const auto& c : j["checks"]) {
            std::string name = c.get<std::string>();
            if (std::find(names.begin(), names.end(), name) == names.end())
                throw ConfigError("checks: unknown family " + name);
            cfg.checks.push_back(name);
        }
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("case_count")) {
        cfg.case_count = j["case_count"].get<int>();
        if (cfg.case_count < 1) throw ConfigError("case_count: must be positive");
    }
    return cfg;
}

JobConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_string(ss.str());
}

Multivector resolve_class(const Session& s, const JobConfig& cfg, bool alpha) {
    const bool named = alpha ? cfg.alpha_is_named : cfg.beta_is_named;
    if (!named) return alpha ? cfg.alpha_terms : cfg.beta_terms;
    const std::string& name = alpha ? cfg.alpha_named : cfg.beta_named;
    if (name == "alpha0") return class_alpha0(s.ctx());
    return class_betaprime(s.ctx(), cfg.unit_f);
}

std::string dims_report(const Session& s) {
    ordered out;
    const auto& ctx = s.ctx();
    out["e"] = ctx.e;
    out["d"] = ctx.d;
    out["n"] = ctx.n;
    out["dimB"] = static_cast<int>(s.secant().named.size());
    out["dimHW"] = ctx.hw.dim();
    out["dimA2"] = static_cast<int>(ctx.xi_avatar.size());
    out["dimSym"] = ctx.sym_part.dim();
    {
        // rational bucket dimensions of the tensor square
        const auto& B = s.secant();
        const int m = static_cast<int>(B.named.size());
        std::vector<int> bucket_dims(ctx.e / 2 + 1, 0);
        for (int k = 0; k <= ctx.e / 2; ++k) {
            std::vector<Vec> vecs;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    if (B.types[i].overlap(B.types[j]) != k) continue;
                    Vec v(m * m);
                    for (int a = 0; a < m; ++a)
                        for (int b = 0; b < m; ++b)
                            v[a * m + b] =
                                B.to_named.at(a, i).mul(B.to_named.at(b, j), s.spec());
                    vecs.push_back(std::move(v));
                }
            bucket_dims[k] = static_cast<int>(rational_restriction(vecs, s.spec()).size());
        }
        out["BB"] = bucket_dims;
    }
    out["dimKB1"] = kb1_dimension(s.octx(), s.secant());
    out["dimH11alg"] = h11_algebra_dimension(s.ctx());
    return out.dump();
}

std::string secant_report(const Session& s, const JobConfig& cfg) {
    ordered out;
    const auto& B = s.secant();
    ordered basis;
    for (size_t i = 0; i < B.named.size(); ++i)
        basis[B.names[i]] = json::parse(multivector_json(B.named[i]));
    out["basis"] = basis;
    {
        json dims = json::parse(dims_report(s));
        out["BB"] = dims["BB"];
        out["dimKB1"] = dims["dimKB1"];
    }
    // kernel data and gauge certificates for the configured pair
    Multivector chf1 = resolve_class(s, cfg, true);
    Multivector chf2 = resolve_class(s, cfg, false);
    auto rep = criterion_check(s.octx(), s.secant(), chf1, chf2);
    ordered kb1;
    kb1["member"] = rep.kb1.member;
    ordered sums = ordered::array();
    for (const auto& x : rep.kb1.sums) sums.push_back(tower_json(x));
    kb1["sums"] = sums;
    ordered scales = ordered::array();
    for (size_t i = 0; i < rep.kb1.pair_scales.size(); ++i) {
        ordered entry;
        entry["pair"] = {rep.kb1.pair_index[i].first, rep.kb1.pair_index[i].second};
        entry["scale"] = tower_json(rep.kb1.pair_scales[i]);
        scales.push_back(entry);
    }
    kb1["pair_scales"] = scales;
    out["kb1"] = kb1;
    return out.dump();
}

std::string criterion_report_json(const Session& s, const CriterionReport& rep) {
    ordered out;
    out["r"] = rational_to_string(rep.r);
    ordered buckets;
    for (size_t k = 0; k < rep.bucket_nonzero.size(); ++k)
        buckets[std::to_string(k)] = rep.bucket_nonzero[k];
    out["buckets"] = buckets;
    ordered kb1;
    kb1["member"] = rep.kb1.member;
    ordered sums = ordered::array();
    for (const auto& x : rep.kb1.sums) sums.push_back(tower_json(x));
    kb1["sums"] = sums;
    out["kb1"] = kb1;
    out["kappa_d2"] = json::parse(multivector_json(rep.kappa_d2));
    out["sym_part"] = json::parse(multivector_json(rep.sym_component));
    out["hw_part"] = json::parse(multivector_json(rep.hw_component));
    out["zero_rank"] = rep.zero_rank;
    out["beta0_nonzero"] = rep.beta0_nonzero;
    out["beta1_nonzero"] = rep.beta1_nonzero;
    out["alpha0_beta0_rank_nonzero"] = rep.alpha0_beta0_rank_nonzero;
    out["verdict"] = rep.verdict ? "pass" : "fail";
    return out.dump();
}

std::string hodge_report(const Session& s) {
    ordered out;
    const auto& fix = s.fixture();
    const auto& ctx = s.ctx();
    ordered hodge_b = ordered::array();
    const int h = ctx.V.half();
    Matrix ix(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) ix.at(i, j) = fix.I.on_v.at(i, j);
    for (const auto& b : s.secant().named)
        hodge_b.push_back(hodge_type_test(ix, b, s.spec()));
    out["hodgeB"] = hodge_b;
    ordered dims = ordered::array();
    for (auto [p, m] : weil_condition(ctx, fix.I)) dims.push_back({p, m});
    out["weil_dims"] = dims;
    auto verdict = omega_membership(ctx, fix.I, fix.polarizing_t);
    ordered omega;
    omega["member"] = verdict.member;
    if (!verdict.member) omega["failing_clause"] = verdict.failing_clause;
    out["omega"] = omega;
    out["t_found"] = tower_json(fix.polarizing_t);
    return out.dump();
}

std::string suite_report(const std::vector<SuiteResult>& results) {
    ordered arr = ordered::array();
    for (const auto& r : results) {
        ordered entry;
        entry["family"] = r.name;
        entry["pass"] = r.pass;
        entry["cases"] = r.cases;
        if (!r.pass) entry["counterexample"] = r.counterexample;
        arr.push_back(entry);
    }
    return arr.dump();
}

namespace {

void markdown_value(std::ostream& os, const json& v, int depth) {
    if (v.is_object()) {
        os << "\n";
        for (const auto& [k, val] : v.items()) {
            for (int i = 0; i < depth; ++i) os << "  ";
            os << "- **" << k << "**: ";
            markdown_value(os, val, depth + 1);
        }
    } else if (v.is_array() && !v.empty() && v[0].is_object() && v[0].contains("family")) {
        os << "\n\n| family | pass | cases |\n|---|---|---|\n";
        for (const auto& row : v)
            os << "| " << row["family"].get<std::string>() << " | "
               << (row["pass"].get<bool>() ? "pass" : "FAIL") << " | " << row["cases"]
               << " |\n";
    } else {
        std::string dumped = v.dump();
        if (dumped.size() > 160) dumped = dumped.substr(0, 157) + "...";
        os << dumped << "\n";
    }
}

}  // namespace

std::string render_markdown(const std::string& title, const std::string& json_payload) {
    std::ostringstream os;
    os << "## " << title << "\n";
    markdown_value(os, json::parse(json_payload), 0);
    return os.str();
}

}  // namespace weilspin
