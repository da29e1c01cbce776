#pragma once

// Configuration ingestion and report emission for the command-line driver.

#include <string>

#include "weilspin/suite.hpp"

namespace weilspin {

struct JobConfig {
    TowerSpec field;
    int rank_d = 4;
    bool theta_darboux = true;
    std::vector<std::vector<TowerElt>> theta_matrix;
    TowerElt unit_f = TowerElt::from_f(2, 1);
    // classes resolved against the session when named
    std::string alpha_named = "alpha0";
    std::string beta_named = "betaprime";
    Multivector alpha_terms, beta_terms;
    bool alpha_is_named = true, beta_is_named = true;
    std::vector<std::string> checks;
    uint64_t seed = 0;
    int case_count = 100;
};

// throws ConfigError with a field-path message on schema violations
JobConfig load_config_file(const std::string& path);
JobConfig load_config_string(const std::string& text);

Multivector resolve_class(const Session& s, const JobConfig& cfg, bool alpha);

struct RunReport {
    std::string dims_json;
    std::string secant_json;
    std::string criterion_json;
    std::string hodge_json;
    std::string suite_json;
    double elapsed_seconds = 0;
    bool all_pass = true;
    bool degenerate = false;
};

std::string dims_report(const Session& s);
std::string secant_report(const Session& s, const JobConfig& cfg);
std::string criterion_report_json(const Session& s, const CriterionReport& rep);
std::string hodge_report(const Session& s);
std::string suite_report(const std::vector<SuiteResult>& results);

// canonical JSON serialization of a multivector term list
std::string multivector_json(const Multivector& x);
Multivector multivector_from_json_text(const std::string& text, int rank);

std::string render_markdown(const std::string& title, const std::string& json_payload);

}  // namespace weilspin
