#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circsat/truth_table.hpp"

namespace circsat {

/// Tri-valued output bit of a partial function.
enum class Tri : std::uint8_t { Zero, One, DontCare };

/// A total function {0,1}^n -> {0,1}^m as one truth table per output.
class FunctionSpec {
public:
  FunctionSpec() = default;
  FunctionSpec(int input_count, int output_count);

  int input_count() const { return input_count_; }
  int output_count() const { return static_cast<int>(tables_.size()); }

  const TruthTable &output(int h) const { return tables_.at(h); }
  TruthTable &output(int h) { return tables_.at(h); }

  bool get(int h, std::uint64_t x) const { return tables_[h].get(x); }
  void set(int h, std::uint64_t x, bool v) { tables_[h].set(x, v); }

  /// Output values at assignment x, output 0 first.
  std::vector<bool> row(std::uint64_t x) const;

  const std::vector<std::string> &labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);

  bool operator==(const FunctionSpec &other) const { return tables_ == other.tables_; }

private:
  int input_count_ = 0;
  std::vector<TruthTable> tables_;
  std::vector<std::string> labels_;
};

/// A target function with don't-cares: a care set over inputs and, for each
/// care input, a tri-valued entry per output bit.
///
/// Invariant: defined(h) is a subset of care() for every output h, and value
/// bits outside defined(h) are zero.
class PartialSpec {
public:
  PartialSpec() = default;
  /// All inputs in the care set, every output bit don't-care.
  PartialSpec(int input_count, int output_count);
  /// Total function: care everywhere, nothing free.
  explicit PartialSpec(const FunctionSpec &total);

  int input_count() const { return input_count_; }
  int output_count() const { return static_cast<int>(values_.size()); }

  bool is_care(std::uint64_t x) const { return care_.get(x); }
  Tri at(int h, std::uint64_t x) const;
  /// Sets an entry; also adds x to the care set.
  void set(int h, std::uint64_t x, Tri v);
  /// Removes x from the care set and clears its entries.
  void drop(std::uint64_t x);

  const TruthTable &care() const { return care_; }
  const TruthTable &defined(int h) const { return defined_.at(h); }
  const TruthTable &value(int h) const { return values_.at(h); }

  /// Care assignments in increasing index order.
  std::vector<std::uint64_t> care_assignments() const;

  const std::vector<std::string> &labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);

  bool is_total() const;

  bool operator==(const PartialSpec &other) const {
    return care_ == other.care_ && defined_ == other.defined_ && values_ == other.values_;
  }

private:
  int input_count_ = 0;
  TruthTable care_;
  std::vector<TruthTable> defined_;
  std::vector<TruthTable> values_;
  std::vector<std::string> labels_;
};

/// Default output labels y0..y{m-1}.
std::vector<std::string> default_labels(int output_count, const std::string &prefix = "y");

} // namespace circsat
