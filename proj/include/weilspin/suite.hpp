#pragma once

// Named invariant families run by the `suite` command and the acceptance
// harness: each family replays its identities on randomized exact cases
// (or exhaustively when the instance is small) and reports pass/fail with
// a counterexample payload.

#include <memory>

#include "weilspin/hodge.hpp"
#include "weilspin/secant.hpp"

namespace weilspin {

struct SuiteResult {
    std::string name;
    bool pass = true;
    int cases = 0;
    std::string counterexample;  // serialized witness on failure
};

// One assembled instance: the CM context, the transform tables, the secant
// space, and the built-in complex-structure fixture.  Heap members keep the
// internal references stable across moves.
class Session {
public:
    Session(const TowerSpec& spec, int d, const TowerElt& unit_f, const RMData* rm = nullptr);

    const TowerSpec& spec() const { return ctx_->spec; }
    const WeilContext& ctx() const { return *ctx_; }
    const OrlovContext& octx() const { return *octx_; }
    const SecantSpace& secant() const { return secant_; }
    const Fixture& fixture() const { return fixture_; }
    const TowerElt& unit_f() const { return unit_f_; }

private:
    std::unique_ptr<WeilContext> ctx_;
    std::unique_ptr<OrlovContext> octx_;
    SecantSpace secant_;
    Fixture fixture_;
    TowerElt unit_f_;
};

std::vector<std::string> suite_family_names();

// run the selected families (all when empty), deterministic in (seed, cases)
std::vector<SuiteResult> run_suites(const Session& s, const std::vector<std::string>& which,
                                    uint64_t seed, int cases);

std::string serialize_multivector_compact(const Multivector& x);

}  // namespace weilspin
