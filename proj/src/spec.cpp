#include "circsat/spec.hpp"

#include <bit>
#include <stdexcept>

namespace circsat {

std::vector<std::string> default_labels(int output_count, const std::string &prefix) {
  std::vector<std::string> out;
  out.reserve(output_count);
  for (int h = 0; h < output_count; ++h)
    out.push_back(prefix + std::to_string(h));
  return out;
}

FunctionSpec::FunctionSpec(int input_count, int output_count) : input_count_(input_count) {
  if (output_count < 1)
    throw std::invalid_argument("function needs at least one output");
  tables_.assign(output_count, TruthTable(input_count));
  labels_ = default_labels(output_count);
}

std::vector<bool> FunctionSpec::row(std::uint64_t x) const {
  std::vector<bool> out(tables_.size());
  for (std::size_t h = 0; h < tables_.size(); ++h)
    out[h] = tables_[h].get(x);
  return out;
}

void FunctionSpec::set_labels(std::vector<std::string> labels) {
  if (static_cast<int>(labels.size()) != output_count())
    throw std::invalid_argument("label count does not match output count");
  labels_ = std::move(labels);
}

PartialSpec::PartialSpec(int input_count, int output_count)
    : input_count_(input_count), care_(input_count, true) {
  if (output_count < 1)
    throw std::invalid_argument("function needs at least one output");
  defined_.assign(output_count, TruthTable(input_count));
  values_.assign(output_count, TruthTable(input_count));
  labels_ = default_labels(output_count);
}

PartialSpec::PartialSpec(const FunctionSpec &total)
    : input_count_(total.input_count()), care_(total.input_count(), true) {
  for (int h = 0; h < total.output_count(); ++h) {
    defined_.emplace_back(total.input_count(), true);
    values_.push_back(total.output(h));
  }
  labels_ = total.labels();
}

Tri PartialSpec::at(int h, std::uint64_t x) const {
  if (!defined_[h].get(x))
    return Tri::DontCare;
  return values_[h].get(x) ? Tri::One : Tri::Zero;
}

void PartialSpec::set(int h, std::uint64_t x, Tri v) {
  care_.set(x, true);
  defined_[h].set(x, v != Tri::DontCare);
  values_[h].set(x, v == Tri::One);
}

void PartialSpec::drop(std::uint64_t x) {
  care_.set(x, false);
  for (std::size_t h = 0; h < values_.size(); ++h) {
    defined_[h].set(x, false);
    values_[h].set(x, false);
  }
}

std::vector<std::uint64_t> PartialSpec::care_assignments() const {
  std::vector<std::uint64_t> out;
  const auto words = care_.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(w * 64 + b);
      bits &= bits - 1;
    }
  }
  return out;
}

void PartialSpec::set_labels(std::vector<std::string> labels) {
  if (static_cast<int>(labels.size()) != output_count())
    throw std::invalid_argument("label count does not match output count");
  labels_ = std::move(labels);
}

bool PartialSpec::is_total() const {
  if (care_.count() != care_.num_bits())
    return false;
  for (const auto &d : defined_)
    if (d.count() != d.num_bits())
      return false;
  return true;
}

} // namespace circsat
