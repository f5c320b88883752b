#include "ncgsat/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ncgsat {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::gsat: return "gsat";
    case Variant::csat: return "csat";
    case Variant::dsat: return "dsat";
    case Variant::rsat: return "rsat";
    case Variant::msat: return "msat";
  }
  return "?";
}

std::string to_string(Backend b) {
  return b == Backend::non_clausal ? "nc" : "clausal";
}

std::optional<Variant> variant_from_string(const std::string& s) {
  if (s == "gsat") return Variant::gsat;
  if (s == "csat") return Variant::csat;
  if (s == "dsat") return Variant::dsat;
  if (s == "rsat") return Variant::rsat;
  if (s == "msat") return Variant::msat;
  return std::nullopt;
}

std::optional<Backend> backend_from_string(const std::string& s) {
  if (s == "nc" || s == "non_clausal") return Backend::non_clausal;
  if (s == "clausal") return Backend::clausal;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// NonClausalEngine
// ---------------------------------------------------------------------------

NonClausalEngine::NonClausalEngine(std::shared_ptr<const CompiledFormula> cf)
    : cf_(std::move(cf)), state_(*cf_) {
  for (VarId v = 0; v < cf_->var_count(); ++v)
    if (!cf_->leaves_of(v).empty()) occurring_vars_.push_back(v);
}

std::uint32_t NonClausalEngine::var_count() const { return cf_->var_count(); }

void NonClausalEngine::reset(const Assignment& t) { state_.reset(t); }

const Score& NonClausalEngine::score() const { return state_.score(); }

Score NonClausalEngine::delta(VarId v) const { return state_.delta(v); }

void NonClausalEngine::flip(VarId v) { state_.flip(v); }

const Assignment& NonClausalEngine::assignment() const {
  return state_.assignment();
}

std::uint64_t NonClausalEngine::update_work() const {
  return state_.total_recomputed();
}

// Polarity-tracked branch descent: from the root, repeatedly step into a
// child whose relevant score component is nonzero (s at positive polarity,
// s_neg at negative; negation flips polarity, an implication flips it on the
// left child, an equivalence offers the children of whichever product term
// is nonzero). Subtrees without variables are skipped; if only those remain
// the descent cannot reach a leaf variable (the falsity is caused by
// constants) and the pick falls back to a uniform occurring variable.
VarId NonClausalEngine::walk_pick(Rng& rng) const {
  const CompiledFormula& cf = *cf_;
  if (state_.score() == 0)
    throw std::logic_error("walk_pick called on a satisfied state");

  std::uint32_t node = 0;
  bool positive = true;
  std::vector<std::pair<std::uint32_t, bool>> options;
  for (;;) {
    if (cf.kind(node) == CKind::Literal) return cf.literal_var(node);

    options.clear();
    auto offer = [&](std::uint32_t child, bool pol) {
      if (!cf.subtree_has_vars(child)) return;
      const ScorePair& p = state_.pair_at(child);
      if ((pol ? p.s : p.s_neg) != 0) options.emplace_back(child, pol);
    };

    switch (cf.kind(node)) {
      case CKind::Not:
        offer(cf.first_child(node), !positive);
        break;
      case CKind::And:
      case CKind::Or: {
        // Relevant component is a sum in one polarity and a product in the
        // other; either way the children with nonzero component are valid.
        for (std::uint32_t c = cf.first_child(node), k = 0;
             k < cf.child_count(node); ++k, c = cf.next_sibling(c))
          offer(c, positive);
        break;
      }
      case CKind::Implies: {
        std::uint32_t a = cf.first_child(node);
        std::uint32_t b = cf.next_sibling(a);
        if (positive) {
          offer(a, false);
          offer(b, true);
        } else {
          offer(a, true);
          offer(b, false);
        }
        break;
      }
      case CKind::Iff: {
        std::uint32_t a = cf.first_child(node);
        std::uint32_t b = cf.next_sibling(a);
        const ScorePair& pa = state_.pair_at(a);
        const ScorePair& pb = state_.pair_at(b);
        if (positive) {
          if (pa.s_neg * pb.s != 0) {
            offer(a, false);
            offer(b, true);
          }
          if (pb.s_neg * pa.s != 0) {
            offer(b, false);
            offer(a, true);
          }
        } else {
          if (pa.s * pb.s != 0) {
            offer(a, true);
            offer(b, true);
          }
          if (pa.s_neg * pb.s_neg != 0) {
            offer(a, false);
            offer(b, false);
          }
        }
        break;
      }
      default:
        break;  // constants: no options
    }

    if (options.empty()) {
      if (occurring_vars_.empty())
        throw std::logic_error("walk_pick on a formula without variables");
      return occurring_vars_[occurring_vars_.size() >= 2
                                 ? rng.below(occurring_vars_.size())
                                 : 0];
    }
    std::size_t choice =
        options.size() >= 2 ? rng.below(options.size()) : 0;
    node = options[choice].first;
    positive = options[choice].second;
  }
}

// ---------------------------------------------------------------------------
// ClausalEngine
// ---------------------------------------------------------------------------

ClausalEngine::ClausalEngine(std::shared_ptr<const ClauseSet> cs)
    : cs_(std::move(cs)) {
  occ_.resize(cs_->var_count);
  for (std::uint32_t ci = 0; ci < cs_->clauses.size(); ++ci) {
    for (Literal lit : cs_->clauses[ci].lits()) {
      auto& list = occ_[lit.var];
      if (!list.empty() && list.back().clause == ci) {
        (lit.negated ? list.back().neg : list.back().pos) = true;
      } else {
        list.push_back({ci, !lit.negated, lit.negated});
      }
    }
  }
  for (VarId v = 0; v < cs_->var_count; ++v)
    if (!occ_[v].empty()) occurring_vars_.push_back(v);
}

std::uint32_t ClausalEngine::var_count() const { return cs_->var_count; }

void ClausalEngine::reset(const Assignment& t) {
  if (t.size() != cs_->var_count)
    throw std::invalid_argument("assignment size mismatch");
  assign_ = t;
  true_count_.assign(cs_->clauses.size(), 0);
  false_count_ = 0;
  for (std::uint32_t ci = 0; ci < cs_->clauses.size(); ++ci) {
    std::uint32_t tc = 0;
    for (Literal lit : cs_->clauses[ci].lits())
      if (assign_.get(lit.var) != lit.negated) ++tc;
    true_count_[ci] = tc;
    if (tc == 0) ++false_count_;
  }
  score_ = false_count_;
}

const Score& ClausalEngine::score() const { return score_; }

// Score change contributed by one clause if v were flipped now.
std::int64_t ClausalEngine::flip_effect(VarId v, const Occurrence& o) const {
  bool bit = assign_.get(v);
  std::uint32_t now = (o.pos && bit ? 1u : 0u) + (o.neg && !bit ? 1u : 0u);
  std::uint32_t then = (o.pos && !bit ? 1u : 0u) + (o.neg && bit ? 1u : 0u);
  std::uint32_t tc = true_count_[o.clause];
  std::uint32_t new_tc = tc - now + then;
  return static_cast<std::int64_t>(new_tc == 0) -
         static_cast<std::int64_t>(tc == 0);
}

Score ClausalEngine::delta(VarId v) const {
  std::int64_t d = 0;
  for (const Occurrence& o : occ_[v]) d += flip_effect(v, o);
  return Score(d);
}

void ClausalEngine::flip(VarId v) {
  for (const Occurrence& o : occ_[v]) {
    bool bit = assign_.get(v);
    std::uint32_t now = (o.pos && bit ? 1u : 0u) + (o.neg && !bit ? 1u : 0u);
    std::uint32_t then = (o.pos && !bit ? 1u : 0u) + (o.neg && bit ? 1u : 0u);
    std::uint32_t& tc = true_count_[o.clause];
    std::uint32_t new_tc = tc - now + then;
    if (tc == 0 && new_tc != 0) --false_count_;
    if (tc != 0 && new_tc == 0) ++false_count_;
    tc = new_tc;
  }
  clauses_scanned_ += occ_[v].size();
  assign_.flip(v);
  score_ = false_count_;
}

const Assignment& ClausalEngine::assignment() const { return assign_; }

std::uint64_t ClausalEngine::update_work() const { return clauses_scanned_; }

// Uniform falsified clause, then a uniform literal inside it. Falsified
// empty clauses carry no variable and are skipped; if nothing else is
// falsified the pick degenerates to a uniform occurring variable.
VarId ClausalEngine::walk_pick(Rng& rng) const {
  if (false_count_ == 0)
    throw std::logic_error("walk_pick called on a satisfied state");
  std::vector<std::uint32_t> falsified;
  falsified.reserve(false_count_);
  for (std::uint32_t ci = 0; ci < cs_->clauses.size(); ++ci)
    if (true_count_[ci] == 0 && !cs_->clauses[ci].empty())
      falsified.push_back(ci);
  if (falsified.empty()) {
    if (occurring_vars_.empty())
      throw std::logic_error("walk_pick on a clause set without varials");
    return occurring_vars_[occurring_vars_.size() >= 2
                               ? rng.below(occurring_vars_.size())
                               : 0];
  }
  std::uint32_t ci =
      falsified[falsified.size() >= 2 ? rng.below(falsified.size()) : 0];
  const auto& lits = cs_->clauses[ci].lits();
  return lits[lits.size() >= 2 ? rng.below(lits.size()) : 0].var;
}

// ---------------------------------------------------------------------------
// Loop policies
// ---------------------------------------------------------------------------

std::vector<VarId> hill_climb(const SearchEngine& eng, Variant variant) {
  const std::uint32_t n = eng.var_count();
  std::vector<VarId> candidates;
  if (variant == Variant::rsat) {
    candidates.resize(n);
    for (VarId v = 0; v < n; ++v) candidates[v] = v;
    return candidates;
  }
  std::vector<VarId> improving;
  Score best;
  bool have_best = false;
  for (VarId v = 0; v < n; ++v) {
    Score d = eng.delta(v);
    if (variant == Variant::csat && d < 0) improving.push_back(v);
    if (!have_best || d < best) {
      best = std::move(d);
      have_best = true;
      candidates.clear();
      candidates.push_back(v);
    } else if (d == best) {
      candidates.push_back(v);
    }
  }
  // CSAT moves only downhill; when nothing improves it falls back to the
  // minimal-delta set so the search keeps moving.
  if (variant == Variant::csat && !improving.empty()) return improving;
  return candidates;
}

VarId pick_flip(const std::vector<VarId>& candidates, Variant variant,
                Rng& rng, std::optional<VarId> last_flipped) {
  if (candidates.empty())
    throw std::invalid_argument("empty candidate set");
  if (variant == Variant::dsat) return candidates.front();
  if (variant == Variant::msat && last_flipped) {
    std::vector<VarId> filtered;
    filtered.reserve(candidates.size());
    for (VarId v : candidates)
      if (v != *last_flipped) filtered.push_back(v);
    if (!filtered.empty())
      return filtered[filtered.size() >= 2 ? rng.below(filtered.size()) : 0];
    // sole-candidate exception: the last flipped variable is all there is
  }
  return candidates[candidates.size() >= 2 ? rng.below(candidates.size()) : 0];
}

Assignment averaging_in_initial(const Assignment& latest,
                                const Assignment& previous, Rng& rng) {
  if (latest.size() != previous.size())
    throw std::invalid_argument("assignment size mismatch");
  Assignment out(latest.size());
  for (VarId v = 0; v < latest.size(); ++v) {
    bool a = latest.get(v);
    out.set(v, a == previous.get(v) ? a : rng.bit());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search loop
// ---------------------------------------------------------------------------

namespace {

struct TryOutcome {
  bool sat = false;
  Assignment model;
  std::uint64_t flips = 0;
  Score best;
  Assignment best_assign;
  std::vector<VarId> trace;
};

TryOutcome run_one_try(SearchEngine& eng, const SearchConfig& cfg, Rng& rng,
                       const Assignment& initial) {
  eng.reset(initial);
  TryOutcome out;
  out.best = eng.score();
  out.best_assign = eng.assignment();
  std::optional<VarId> last_flipped;

  for (std::uint64_t k = 1; k <= cfg.max_flips; ++k) {
    if (eng.score() == 0) {
      out.sat = true;
      out.model = eng.assignment();
      return out;
    }
    if (eng.var_count() == 0) break;  // constant formula, nothing to flip

    VarId v;
    bool walk = cfg.walk_prob > 0.0 && rng.coin(cfg.walk_prob);
    if (walk) {
      v = eng.walk_pick(rng);
    } else {
      v = pick_flip(hill_climb(eng, cfg.variant), cfg.variant, rng,
                    last_flipped);
    }
    eng.flip(v);
    ++out.flips;
    last_flipped = v;
    if (cfg.record_trace) out.trace.push_back(v);
    if (eng.score() < out.best) {
      out.best = eng.score();
      out.best_assign = eng.assignment();
    }
  }
  return out;
}

void validate(const SearchConfig& cfg) {
  if (cfg.max_tries < 1 || cfg.max_flips < 1)
    throw std::invalid_argument("max_tries and max_flips must be >= 1");
  if (cfg.walk_prob < 0.0 || cfg.walk_prob > 1.0)
    throw std::invalid_argument("walk probability must be within [0, 1]");
  if (cfg.parallel_tries > 1 && cfg.averaging_in)
    throw std::invalid_argument(
        "averaging-in needs sequential tries; drop --parallel-tries");
  if (cfg.parallel_tries > 1 && cfg.record_trace)
    throw std::invalid_argument(
        "trace recording needs sequential tries; drop --parallel-tries");
}

Assignment random_assignment(std::uint32_t n, Rng& rng) {
  Assignment t(n);
  for (VarId v = 0; v < n; ++v) t.set(v, rng.bit());
  return t;
}

SearchResult run_sequential(
    SearchEngine& eng, const SearchConfig& cfg,
    const std::function<bool(const Assignment&)>& verify) {
  Rng rng(cfg.seed);
  SearchResult res;
  const std::uint32_t n = eng.var_count();

  Assignment latest_best, older_best;
  bool have_two = false, have_one = false;
  bool best_set = false;

  for (std::uint64_t j = 1; j <= cfg.max_tries; ++j) {
    res.tries_used = j;
    Assignment initial =
        cfg.averaging_in && have_two
            ? averaging_in_initial(latest_best, older_best, rng)
            : random_assignment(n, rng);

    TryOutcome t = run_one_try(eng, cfg, rng, initial);
    res.flips_used += t.flips;
    if (cfg.record_trace)
      res.trace.insert(res.trace.end(), t.trace.begin(), t.trace.end());
    if (!best_set || t.best < res.best_score) {
      res.best_score = t.best;
      best_set = true;
    }
    if (t.sat) {
      if (!verify(t.model))
        throw std::logic_error(
            "engine returned a model that fails independent verification");
      res.sat = true;
      res.model = std::move(t.model);
      res.best_score = 0;
      return res;
    }
    older_best = std::move(latest_best);
    latest_best = std::move(t.best_assign);
    have_two = have_one;
    have_one = true;
  }
  return res;
}

SearchResult run_parallel(
    const std::function<std::unique_ptr<SearchEngine>()>& make_engine,
    const SearchConfig& cfg,
    const std::function<bool(const Assignment&)>& verify) {
  const std::uint64_t tries = cfg.max_tries;
  std::vector<std::optional<TryOutcome>> outcomes(tries);
  std::atomic<std::uint64_t> next{1};
  std::atomic<std::uint64_t> winner{tries + 1};

  auto worker = [&] {
    std::unique_ptr<SearchEngine> eng = make_engine();
    for (;;) {
      std::uint64_t j = next.fetch_add(1);
      if (j > tries || j > winner.load()) return;
      Rng rng(cfg.seed ^ j);
      Assignment initial = random_assignment(eng->var_count(), rng);
      TryOutcome t = run_one_try(*eng, cfg, rng, initial);
      if (t.sat) {
        std::uint64_t cur = winner.load();
        while (j < cur && !winner.compare_exchange_weak(cur, j)) {
        }
      }
      outcomes[j - 1] = std::move(t);
    }
  };

  std::vector<std::thread> pool;
  unsigned workers = std::min<std::uint64_t>(cfg.parallel_tries, tries);
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  // Merge deterministically: the smallest satisfied try wins, and only the
  // tries up to it (all of which completed) contribute statistics.
  std::uint64_t win = winner.load();
  std::uint64_t upto = std::min(win, tries);
  SearchResult res;
  bool best_set = false;
  for (std::uint64_t j = 1; j <= upto; ++j) {
    const TryOutcome& t = *outcomes[j - 1];
    res.tries_used = j;
    res.flips_used += t.flips;
    if (!best_set || t.best < res.best_score) {
      res.best_score = t.best;
      best_set = true;
    }
    if (j == win) {
      if (!verify(t.model))
        throw std::logic_error(
            "engine returned a model that fails independent verification");
      res.sat = true;
      res.model = t.model;
      res.best_score = 0;
    }
  }
  return res;
}

}  // namespace

SearchResult run_search(SearchEngine& eng, const SearchConfig& cfg,
                        const std::function<bool(const Assignment&)>& verify) {
  validate(cfg);
  auto start = std::chrono::steady_clock::now();
  SearchResult res = run_sequential(eng, cfg, verify);
  res.update_work = eng.update_work();
  res.elapsed_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

SearchResult gsat_run(const Problem& p, const SearchConfig& cfg) {
  validate(cfg);
  auto start = std::chrono::steady_clock::now();
  auto verify = [&p](const Assignment& t) { return evaluate(p.root, t); };

  SearchResult res;
  std::atomic<std::uint64_t> work{0};
  if (cfg.backend == Backend::clausal) {
    auto cs = std::make_shared<const ClauseSet>(cnf_standard(p));
    if (cfg.parallel_tries > 1) {
      res = run_parallel(
          [cs, &work] {
            return std::make_unique<ClausalEngine>(cs);
          },
          cfg, verify);
    } else {
      ClausalEngine eng(cs);
      res = run_sequential(eng, cfg, verify);
      work = eng.update_work();
    }
  } else {
    auto cf =
        std::make_shared<const CompiledFormula>(p.root, p.var_count());
    if (cfg.parallel_tries > 1) {
      res = run_parallel(
          [cf, &work] {
            return std::make_unique<NonClausalEngine>(cf);
          },
          cfg, verify);
    } else {
      NonClausalEngine eng(cf);
      res = run_sequential(eng, cfg, verify);
      work = eng.update_work();
    }
  }
  res.update_work = work.load();
  res.elapsed_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

SearchResult gsat_run(const ClauseSet& cs, const SearchConfig& cfg) {
  validate(cfg);
  auto start = std::chrono::steady_clock::now();
  auto shared = std::make_shared<const ClauseSet>(cs);
  auto verify = [&cs](const Assignment& t) { return satisfies(cs, t); };
  SearchResult res;
  if (cfg.parallel_tries > 1) {
    res = run_parallel(
        [shared] { return std::make_unique<ClausalEngine>(shared); }, cfg,
        verify);
  } else {
    ClausalEngine eng(shared);
    res = run_sequential(eng, cfg, verify);
    res.update_work = eng.update_work();
  }
  res.elapsed_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

}  // namespace ncgsat
