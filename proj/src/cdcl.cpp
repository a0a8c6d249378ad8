#include "cdcl.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>

namespace circsat::detail {

namespace {

constexpr double kVarDecay = 0.95;
constexpr float kClauseDecay = 0.999f;
constexpr std::uint64_t kFirstReduce = 2000;
constexpr std::uint64_t kReduceIncrement = 300;
constexpr double kFastAlpha = 1.0 / 32;
constexpr double kSlowAlpha = 1.0 / 4096;
constexpr double kRestartMargin = 1.2;
constexpr std::uint64_t kMinRestartInterval = 50;

} // namespace

Cdcl::Cdcl(int variable_count)
    : nvars_(variable_count), watches_(2 * static_cast<std::size_t>(variable_count)),
      val_(2 * static_cast<std::size_t>(variable_count), 0), level_(variable_count, 0),
      reason_(variable_count, kNoReason), phase_(variable_count, 0),
      activity_(variable_count, 0.0), heap_index_(variable_count, -1),
      seen_(variable_count, 0) {
  for (int v = 0; v < nvars_; ++v)
    heap_insert(v);
}

float Cdcl::activity(CRef c) const {
  float a;
  std::memcpy(&a, &arena_[c + 2], sizeof a);
  return a;
}

void Cdcl::set_activity(CRef c, float a) { std::memcpy(&arena_[c + 2], &a, sizeof a); }

Cdcl::CRef Cdcl::alloc(std::span<const Lit> ls, bool is_learnt) {
  const CRef c = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<std::uint32_t>(ls.size()) << 2 | (is_learnt ? 1u : 0u));
  arena_.push_back(0);
  arena_.push_back(0);
  arena_.insert(arena_.end(), ls.begin(), ls.end());
  set_activity(c, 0.0f);
  return c;
}

void Cdcl::attach(CRef c) {
  const Lit *l = lits(c);
  watches_[l[0]].push_back({c, l[1]});
  watches_[l[1]].push_back({c, l[0]});
}

bool Cdcl::add_clause(std::span<const int> in) {
  if (!ok_)
    return false;
  std::vector<Lit> ls;
  ls.reserve(in.size());
  for (int d : in)
    ls.push_back(from_dimacs(d));
  std::sort(ls.begin(), ls.end());
  std::vector<Lit> kept;
  Lit prev = 0xFFFFFFFFu;
  for (Lit l : ls) {
    if (l == prev)
      continue;
    if (prev != 0xFFFFFFFFu && l == (prev ^ 1u))
      return true; // tautology
    prev = l;
    if (val_[l] == 1)
      return true;
    if (val_[l] == -1)
      continue;
    kept.push_back(l);
  }
  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason)
      ok_ = false;
    return ok_;
  }
  const CRef c = alloc(kept, false);
  originals_.push_back(c);
  attach(c);
  return true;
}

void Cdcl::enqueue(Lit l, CRef reason) {
  const int v = var(l);
  val_[l] = 1;
  val_[l ^ 1u] = -1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

Cdcl::CRef Cdcl::propagate() {
  CRef confl = kNoReason;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = p ^ 1u;
    auto &ws = watches_[false_lit];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    const std::size_t n = ws.size();
    while (i < n) {
      const Watcher w = ws[i++];
      if (val_[w.blocker] == 1) {
        ws[j++] = w;
        continue;
      }
      Lit *c = lits(w.cref);
      if (c[0] == false_lit)
        std::swap(c[0], c[1]);
      const Lit first = c[0];
      const Watcher nw{w.cref, first};
      if (first != w.blocker && val_[first] == 1) {
        ws[j++] = nw;
        continue;
      }
      const std::uint32_t size = csize(w.cref);
      bool moved = false;
      for (std::uint32_t k = 2; k < size; ++k) {
        if (val_[c[k]] != -1) {
          c[1] = c[k];
          c[k] = false_lit;
          watches_[c[1]].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved)
        continue;
      ws[j++] = nw;
      if (val_[first] == -1) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < n)
          ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
  }
  return confl;
}

void Cdcl::analyze(CRef confl, std::vector<Lit> &out, int &bt_level, std::uint32_t &out_lbd) {
  out.clear();
  out.push_back(0);
  int path = 0;
  Lit p = 0xFFFFFFFFu;
  std::size_t index = trail_.size();
  do {
    if (learnt(confl))
      bump_clause(confl);
    const Lit *c = lits(confl);
    const std::uint32_t size = csize(confl);
    for (std::uint32_t k = (p == 0xFFFFFFFFu ? 0 : 1); k < size; ++k) {
      const Lit q = c[k];
      const int v = var(q);
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++path;
        else
          out.push_back(q);
      }
    }
    while (!seen_[var(trail_[--index])]) {
    }
    p = trail_[index];
    confl = reason_[var(p)];
    seen_[var(p)] = 0;
    --path;
  } while (path > 0);
  out[0] = p ^ 1u;

  // Recursive minimization.
  to_clear_.assign(out.begin(), out.end());
  std::uint32_t levels = 0;
  for (std::size_t k = 1; k < out.size(); ++k)
    levels |= abstract_level(var(out[k]));
  std::size_t kept = 1;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const int v = var(out[k]);
    if (reason_[v] == kNoReason || !redundant(out[k], levels))
      out[kept++] = out[k];
  }
  out.resize(kept);
  for (Lit l : to_clear_)
    seen_[var(l)] = 0;

  bt_level = 0;
  if (out.size() > 1) {
    std::size_t max_k = 1;
    for (std::size_t k = 2; k < out.size(); ++k)
      if (level_[var(out[k])] > level_[var(out[max_k])])
        max_k = k;
    std::swap(out[1], out[max_k]);
    bt_level = level_[var(out[1])];
  }

  ++stamp_;
  if (level_stamp_.size() < static_cast<std::size_t>(decision_level()) + 1)
    level_stamp_.resize(decision_level() + 1, 0);
  out_lbd = 0;
  for (Lit l : out) {
    const int lv = level_[var(l)];
    if (level_stamp_[lv] != stamp_) {
      level_stamp_[lv] = stamp_;
      ++out_lbd;
    }
  }
}

bool Cdcl::redundant(Lit p, std::uint32_t levels) {
  stack_.clear();
  stack_.push_back(p);
  const std::size_t top = to_clear_.size();
  while (!stack_.empty()) {
    const Lit q = stack_.back();
    stack_.pop_back();
    const CRef c = reason_[var(q)];
    const Lit *ls = lits(c);
    const std::uint32_t size = csize(c);
    for (std::uint32_t k = 1; k < size; ++k) {
      const Lit l = ls[k];
      const int v = var(l);
      if (seen_[v] || level_[v] == 0)
        continue;
      if (reason_[v] != kNoReason && (abstract_level(v) & levels)) {
        seen_[v] = 1;
        stack_.push_back(l);
        to_clear_.push_back(l);
      } else {
        for (std::size_t j = top; j < to_clear_.size(); ++j)
          seen_[var(to_clear_[j])] = 0;
        to_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Cdcl::backtrack(int level) {
  if (decision_level() <= level)
    return;
  for (std::size_t k = trail_.size(); k-- > static_cast<std::size_t>(trail_lim_[level]);) {
    const Lit l = trail_[k];
    const int v = var(l);
    val_[l] = 0;
    val_[l ^ 1u] = 0;
    reason_[v] = kNoReason;
    phase_[v] = (l & 1u) ? 0 : 1;
    if (!heap_contains(v))
      heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

Cdcl::Lit Cdcl::pick_branch() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    const Lit pos = static_cast<Lit>(2 * v);
    if (val_[pos] == 0)
      return phase_[v] ? pos : pos ^ 1u;
  }
  return 0xFFFFFFFFu;
}

void Cdcl::bump_var(int v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double &a : activity_)
      a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v))
    heap_up(heap_index_[v]);
}

void Cdcl::bump_clause(CRef c) {
  const float a = activity(c) + cla_inc_;
  set_activity(c, a);
  if (a > 1e20f) {
    for (CRef l : learnts_)
      set_activity(l, activity(l) * 1e-20f);
    cla_inc_ *= 1e-20f;
  }
}

void Cdcl::decay() {
  var_inc_ /= kVarDecay;
  cla_inc_ /= kClauseDecay;
}

void Cdcl::heap_insert(int v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_index_[v]);
}

void Cdcl::heap_up(int pos) {
  const int v = heap_[pos];
  while (pos > 0) {
    const int parent = (pos - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v])
      break;
    heap_[pos] = heap_[parent];
    heap_index_[heap_[pos]] = pos;
    pos = parent;
  }
  heap_[pos] = v;
  heap_index_[v] = pos;
}

void Cdcl::heap_down(int pos) {
  const int v = heap_[pos];
  const int n = static_cast<int>(heap_.size());
  while (true) {
    int child = 2 * pos + 1;
    if (child >= n)
      break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]])
      ++child;
    if (activity_[heap_[child]] <= activity_[v])
      break;
    heap_[pos] = heap_[child];
    heap_index_[heap_[pos]] = pos;
    pos = child;
  }
  heap_[pos] = v;
  heap_index_[v] = pos;
}

int Cdcl::heap_pop() {
  const int top = heap_.front();
  heap_index_[top] = -1;
  const int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

bool Cdcl::locked(CRef c) const {
  const Lit l0 = lits(c)[0];
  return val_[l0] == 1 && reason_[var(l0)] == c;
}

void Cdcl::reduce_db() {
  std::vector<CRef> candidates;
  std::vector<CRef> kept;
  for (CRef c : learnts_) {
    if (lbd(c) <= 2 || locked(c))
      kept.push_back(c);
    else
      candidates.push_back(c);
  }
  std::sort(candidates.begin(), candidates.end(), [&](CRef a, CRef b) {
    if (lbd(a) != lbd(b))
      return lbd(a) > lbd(b);
    return activity(a) < activity(b);
  });
  const std::size_t drop = candidates.size() / 2;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (k < drop)
      mark_deleted(candidates[k]);
    else
      kept.push_back(candidates[k]);
  }
  learnts_ = std::move(kept);
  collect_garbage(false);
}

void Cdcl::collect_garbage(bool drop_satisfied) {
  if (drop_satisfied) {
    // Only valid at decision level 0.
    auto satisfied = [&](CRef c) {
      const Lit *l = lits(c);
      for (std::uint32_t k = 0; k < csize(c); ++k)
        if (val_[l[k]] == 1)
          return true;
      return false;
    };
    for (auto *list : {&originals_, &learnts_}) {
      std::size_t j = 0;
      for (CRef c : *list) {
        if (satisfied(c))
          mark_deleted(c);
        else
          (*list)[j++] = c;
      }
      list->resize(j);
    }
  }
  std::vector<std::uint32_t> fresh;
  fresh.reserve(arena_.size());
  auto copy_clause = [&](CRef c) {
    const CRef nc = static_cast<CRef>(fresh.size());
    const std::uint32_t words = 3 + csize(c);
    fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + words);
    return nc;
  };
  // Reasons must follow their clause; remember old->new for the trail vars.
  std::vector<std::pair<CRef, CRef>> moved;
  for (auto *list : {&originals_, &learnts_})
    for (CRef &c : *list) {
      const CRef nc = copy_clause(c);
      moved.emplace_back(c, nc);
      c = nc;
    }
  std::sort(moved.begin(), moved.end());
  for (Lit l : trail_) {
    CRef &r = reason_[var(l)];
    if (r == kNoReason)
      continue;
    auto it = std::lower_bound(moved.begin(), moved.end(), std::make_pair(r, CRef{0}));
    r = (it != moved.end() && it->first == r) ? it->second : kNoReason;
  }
  arena_ = std::move(fresh);
  for (auto &ws : watches_)
    ws.clear();
  for (CRef c : originals_)
    attach(c);
  for (CRef c : learnts_)
    attach(c);
}

Cdcl::Result Cdcl::solve(const Limits &limits) {
  model_.clear();
  if (!ok_)
    return Result::Unsat;
  if (propagate() != kNoReason) {
    ok_ = false;
    return Result::Unsat;
  }
  std::uint64_t next_reduce = kFirstReduce;
  std::uint64_t reduce_count = 0;
  std::uint64_t since_restart = 0;
  double fast_ema = 0, slow_ema = 0;
  std::vector<Lit> learnt_clause;

  while (true) {
    const CRef confl = propagate();
    if (confl != kNoReason) {
      ++stats_.conflicts;
      ++since_restart;
      if (decision_level() == 0) {
        ok_ = false;
        return Result::Unsat;
      }
      int bt_level = 0;
      std::uint32_t clause_lbd = 0;
      analyze(confl, learnt_clause, bt_level, clause_lbd);
      backtrack(bt_level);
      if (learnt_clause.size() == 1) {
        enqueue(learnt_clause[0], kNoReason);
      } else {
        const CRef c = alloc(learnt_clause, true);
        lbd(c) = clause_lbd;
        learnts_.push_back(c);
        attach(c);
        bump_clause(c);
        enqueue(learnt_clause[0], c);
      }
      decay();
      fast_ema += kFastAlpha * (clause_lbd - fast_ema);
      slow_ema += kSlowAlpha * (clause_lbd - slow_ema);

      if ((stats_.conflicts & 63) == 0) {
        if (limits.stop && limits.stop->load(std::memory_order_relaxed))
          return Result::Unknown;
        if (limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline)
          return Result::Unknown;
      }
      if (limits.max_conflicts && stats_.conflicts >= limits.max_conflicts)
        return Result::Unknown;
      continue;
    }

    if (since_restart >= kMinRestartInterval && stats_.conflicts > 1000 &&
        fast_ema > kRestartMargin * slow_ema) {
      since_restart = 0;
      ++stats_.restarts;
      backtrack(0);
      if (trail_.size() > units_at_last_gc_) {
        units_at_last_gc_ = trail_.size();
        collect_garbage(true);
      }
    }
    if (stats_.conflicts >= next_reduce) {
      ++reduce_count;
      next_reduce = stats_.conflicts + kFirstReduce + kReduceIncrement * reduce_count;
      reduce_db();
    }

    const Lit next = pick_branch();
    if (next == 0xFFFFFFFFu) {
      model_.assign(nvars_, false);
      for (int v = 0; v < nvars_; ++v)
        model_[v] = val_[2 * v] == 1;
      return Result::Sat;
    }
    ++stats_.decisions;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(next, kNoReason);
  }
}

} // namespace circsat::detail
