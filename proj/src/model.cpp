#include "smoothlm/model.hpp"

#include <array>
#include <cmath>

namespace smoothlm {

namespace {

struct MethodName {
  Method method;
  std::string_view name;
};

constexpr std::array<MethodName, 10> kMethodNames{{
    {Method::ML, "ml"},
    {Method::PlusOne, "plus-one"},
    {Method::PlusDelta, "plus-delta"},
    {Method::InterpBaseline, "interp-baseline"},
    {Method::InterpHeldOut, "interp-held-out"},
    {Method::InterpDelInt, "interp-del-int"},
    {Method::NewAvgCount, "new-avg-count"},
    {Method::Katz, "katz"},
    {Method::ChurchGale, "church-gale"},
    {Method::NewOneCount, "new-one-count"},
}};

}  // namespace

std::string_view method_name(Method method) {
  for (const auto& entry : kMethodNames) {
    if (entry.method == method) return entry.name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& entry : kMethodNames) {
    if (entry.name == name) return entry.method;
  }
  return std::nullopt;
}

const std::vector<Method>& smoothing_methods() {
  static const std::vector<Method> methods{
      Method::InterpBaseline, Method::PlusOne,     Method::PlusDelta,
      Method::Katz,           Method::ChurchGale,  Method::InterpHeldOut,
      Method::InterpDelInt,   Method::NewAvgCount, Method::NewOneCount,
  };
  return methods;
}

std::optional<double> ml_prob(const NGramTable& table, std::span<const WordId> context,
                              WordId word) {
  const auto* row = table.find_row(context);
  if (row == nullptr || row->total == 0) return std::nullopt;
  std::array<WordId, kMaxOrder> gram{};
  std::copy(context.begin(), context.end(), gram.begin());
  gram[context.size()] = word;
  const Count c = table.count(std::span<const WordId>(gram.data(), context.size() + 1));
  return static_cast<double>(c) / static_cast<double>(row->total);
}

double MaximumLikelihoodModel::prob(std::span<const WordId> context, WordId word) const {
  return ml_prob(*table_, context, word).value_or(0.0);
}

double sequence_logprob(const LanguageModel& model, std::span<const WordId> sentence,
                        WordId bos) {
  const std::size_t history = static_cast<std::size_t>(model.order() - 1);
  std::array<WordId, kMaxOrder> window{};
  window.fill(bos);
  double total = 0.0;
  for (WordId w : sentence) {
    total += std::log2(model.prob(std::span<const WordId>(window.data(), history), w));
    if (history > 0) {
      for (std::size_t i = 0; i + 1 < history; ++i) window[i] = window[i + 1];
      window[history - 1] = w;
    }
  }
  return total;
}

double total_probability(const LanguageModel& model, std::span<const WordId> context) {
  double sum = 0.0;
  for (std::size_t w = 0; w < model.vocab_size(); ++w) {
    sum += model.prob(context, static_cast<WordId>(w));
  }
  return sum;
}

}  // namespace smoothlm
