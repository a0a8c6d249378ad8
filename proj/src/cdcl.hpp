// Conflict-driven clause-learning solver used when no external solver is
// configured.
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <vector>

namespace circsat::detail {

class Cdcl {
public:
  enum class Result { Sat, Unsat, Unknown };

  struct Limits {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::uint64_t max_conflicts = 0; // 0 = unlimited
    const std::atomic<bool> *stop = nullptr;
  };

  struct Stats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
  };

  explicit Cdcl(int variable_count);

  /// DIMACS literals. Returns false once the formula is known unsatisfiable.
  bool add_clause(std::span<const int> lits);

  Result solve(const Limits &limits);

  /// Value of DIMACS variable v (1-based) after Sat.
  bool model_value(int v) const { return model_[v - 1]; }
  const Stats &stats() const { return stats_; }

private:
  using Lit = std::uint32_t;
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xFFFFFFFFu;

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  // Arena layout per clause: [size << 2 | deleted << 1 | learnt], [lbd],
  // [activity bits], literals...
  std::uint32_t csize(CRef c) const { return arena_[c] >> 2; }
  bool learnt(CRef c) const { return arena_[c] & 1u; }
  bool deleted(CRef c) const { return arena_[c] & 2u; }
  void mark_deleted(CRef c) { arena_[c] |= 2u; }
  std::uint32_t &lbd(CRef c) { return arena_[c + 1]; }
  float activity(CRef c) const;
  void set_activity(CRef c, float a);
  Lit *lits(CRef c) { return &arena_[c + 3]; }
  const Lit *lits(CRef c) const { return &arena_[c + 3]; }

  CRef alloc(std::span<const Lit> ls, bool is_learnt);
  void attach(CRef c);

  static Lit from_dimacs(int l) {
    return static_cast<Lit>(2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0));
  }
  static int var(Lit l) { return static_cast<int>(l >> 1); }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit> &learnt_clause, int &bt_level, std::uint32_t &out_lbd);
  bool redundant(Lit p, std::uint32_t abstract_levels);
  std::uint32_t abstract_level(int v) const { return 1u << (level_[v] & 31); }
  void backtrack(int level);
  Lit pick_branch();

  void bump_var(int v);
  void bump_clause(CRef c);
  void decay();

  void heap_insert(int v);
  void heap_up(int pos);
  void heap_down(int pos);
  int heap_pop();
  bool heap_contains(int v) const { return heap_index_[v] >= 0; }

  bool locked(CRef c) const;
  void reduce_db();
  void collect_garbage(bool drop_satisfied);

  int nvars_;
  bool ok_ = true;
  std::vector<std::uint32_t> arena_;
  std::vector<CRef> originals_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> val_; // per literal: 1 true, -1 false, 0 unassigned
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<std::int8_t> phase_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  float cla_inc_ = 1.0f;
  std::vector<int> heap_;
  std::vector<int> heap_index_;

  std::vector<std::uint8_t> seen_;
  std::vector<Lit> to_clear_;
  std::vector<Lit> stack_;
  std::vector<std::uint32_t> level_stamp_;
  std::uint32_t stamp_ = 0;

  std::size_t units_at_last_gc_ = 0;
  std::vector<bool> model_;
  Stats stats_;
};

} // namespace circsat::detail
