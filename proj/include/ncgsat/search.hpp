#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncgsat/cnf.hpp"
#include "ncgsat/formula.hpp"
#include "ncgsat/rng.hpp"
#include "ncgsat/score.hpp"

namespace ncgsat {

/// Hill-climb / pick policies:
///   gsat - candidates are all variables with minimal delta (sideways and
///          uphill moves included), picked uniformly;
///   csat - candidates are all strictly improving variables, falling back to
///          the gsat set when none improves, picked uniformly;
///   dsat - gsat candidate set, deterministic pick (smallest variable id);
///   rsat - candidates are all variables, picked uniformly;
///   msat - gsat candidate set, uniform pick avoiding the last flipped
///          variable unless it is the only candidate.
enum class Variant : std::uint8_t { gsat, csat, dsat, rsat, msat };

enum class Backend : std::uint8_t { non_clausal, clausal };

std::string to_string(Variant v);
std::string to_string(Backend b);
std::optional<Variant> variant_from_string(const std::string& s);
std::optional<Backend> backend_from_string(const std::string& s);

struct SearchConfig {
  std::uint64_t max_tries = 10;
  std::uint64_t max_flips = 100;
  Variant variant = Variant::gsat;
  double walk_prob = 0.0;      // probability of a random-walk step
  bool averaging_in = false;   // tries >= 3 start from the bitwise average
  std::uint64_t seed = 0;
  Backend backend = Backend::non_clausal;
  bool record_trace = false;
  unsigned parallel_tries = 1;  // > 1 runs tries on worker threads
};

/// Randomness is consumed in a fixed documented order so equal seeds give
/// equal runs and the two backends stay flip-for-flip identical:
///   1. initial assignment bits in variable-id order (with averaging-in,
///      only the disagreeing bits draw);
///   2. one walk-vs-climb coin per flip iteration, skipped entirely when
///      walk_prob == 0;
///   3. the pick among candidates, or the walk descent choices; every
///      selection draws only when it has at least two options.
/// Parallel mode instead gives try j its own stream seeded with seed ^ j.
struct SearchResult {
  bool sat = false;
  Assignment model;  // valid iff sat; always re-verified independently
  std::uint64_t tries_used = 0;
  std::uint64_t flips_used = 0;
  Score best_score = 0;       // minimum score seen over the whole run
  std::vector<VarId> trace;   // flipped variable ids, when recorded
  std::uint64_t update_work = 0;  // engine work units summed over flips
  double elapsed_sec = 0.0;
};

/// What the Fig-style loop needs from a score backend. Implementations keep
/// score() and delta() exact, so both backends produce identical candidate
/// sets on equivalent inputs.
class SearchEngine {
public:
  virtual ~SearchEngine() = default;

  virtual std::uint32_t var_count() const = 0;
  virtual void reset(const Assignment& t) = 0;
  virtual const Score& score() const = 0;
  virtual Score delta(VarId v) const = 0;
  virtual void flip(VarId v) = 0;
  /// Random-walk pick; requires score() > 0.
  virtual VarId walk_pick(Rng& rng) const = 0;
  virtual const Assignment& assignment() const = 0;
  /// Cumulative per-flip update work: cached pairs recomputed (non-clausal)
  /// or clauses scanned (clausal).
  virtual std::uint64_t update_work() const = 0;
};

/// Score engine running directly on the formula.
class NonClausalEngine final : public SearchEngine {
public:
  explicit NonClausalEngine(std::shared_ptr<const CompiledFormula> cf);

  std::uint32_t var_count() const override;
  void reset(const Assignment& t) override;
  const Score& score() const override;
  Score delta(VarId v) const override;
  void flip(VarId v) override;
  VarId walk_pick(Rng& rng) const override;
  const Assignment& assignment() const override;
  std::uint64_t update_work() const override;

  const ScoreState& state() const { return state_; }

private:
  std::shared_ptr<const CompiledFormula> cf_;
  ScoreState state_;
  std::vector<VarId> occurring_vars_;
};

/// Reference engine over an explicit clause set, with classic per-clause
/// true-literal counts.
class ClausalEngine final : public SearchEngine {
public:
  explicit ClausalEngine(std::shared_ptr<const ClauseSet> cs);

  std::uint32_t var_count() const override;
  void reset(const Assignment& t) override;
  const Score& score() const override;
  Score delta(VarId v) const override;
  void flip(VarId v) override;
  VarId walk_pick(Rng& rng) const override;
  const Assignment& assignment() const override;
  std::uint64_t update_work() const override;

  const ClauseSet& clauses() const { return *cs_; }

private:
  struct Occurrence {
    std::uint32_t clause;
    bool pos;
    bool neg;
  };

  std::int64_t flip_effect(VarId v, const Occurrence& occ) const;

  std::shared_ptr<const ClauseSet> cs_;
  Assignment assign_;
  std::vector<std::uint32_t> true_count_;
  std::uint64_t false_count_ = 0;
  Score score_;
  std::vector<std::vector<Occurrence>> occ_;
  std::vector<VarId> occurring_vars_;
  std::uint64_t clauses_scanned_ = 0;
};

/// Candidate set for the next flip under the variant's hill-climb policy,
/// in ascending variable-id order. Requires var_count() >= 1 and a current
/// delta table.
std::vector<VarId> hill_climb(const SearchEngine& eng, Variant variant);

/// Chooses the flip variable from a nonempty candidate set.
VarId pick_flip(const std::vector<VarId>& candidates, Variant variant,
                Rng& rng, std::optional<VarId> last_flipped);

/// Initial assignment for tries >= 3 under averaging-in: bits where the two
/// latest tries' best assignments agree are copied, the rest drawn uniformly
/// in variable-id order.
Assignment averaging_in_initial(const Assignment& latest,
                                const Assignment& previous, Rng& rng);

/// Runs the full multi-try search loop over an engine. `verify` is the
/// independent model check applied before a model is returned; it must not
/// consult the engine. Throws std::logic_error if verification fails.
SearchResult run_search(SearchEngine& eng, const SearchConfig& cfg,
                        const std::function<bool(const Assignment&)>& verify);

/// Front door: builds the backend selected by cfg and runs the search. The
/// clausal backend converts with cnf_standard (which may throw
/// GuardExceeded). Models are verified by recursive evaluation of p.root.
SearchResult gsat_run(const Problem& p, const SearchConfig& cfg);

/// Runs directly over a clause set with the clausal engine.
SearchResult gsat_run(const ClauseSet& cs, const SearchConfig& cfg);

}  // namespace ncgsat
