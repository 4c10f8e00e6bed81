#include "neuromod/maps.hpp"

#include <array>
#include <utility>

namespace neuromod {
namespace {

template <typename Params>
using Field = std::pair<const char*, double Params::*>;

constexpr std::array<Field<SingleNeuronParams<>>, 3> kSingleFields{{
    {"b", &SingleNeuronParams<>::b},
    {"gamma", &SingleNeuronParams<>::gamma},
    {"w", &SingleNeuronParams<>::w},
}};

constexpr std::array<Field<TwoNeuronParams<>>, 8> kTwoFields{{
    {"b1", &TwoNeuronParams<>::b1},
    {"b2", &TwoNeuronParams<>::b2},
    {"w11", &TwoNeuronParams<>::w11},
    {"w12", &TwoNeuronParams<>::w12},
    {"w21", &TwoNeuronParams<>::w21},
    {"w22", &TwoNeuronParams<>::w22},
    {"alpha", &TwoNeuronParams<>::alpha},
    {"beta", &TwoNeuronParams<>::beta},
}};

template <typename Params, std::size_t N>
double Params::*lookup(const std::array<Field<Params>, N>& fields, const std::string& name) {
  for (const auto& [key, member] : fields)
    if (name == key) return member;
  throw ValidationError("unknown parameter '" + name + "'");
}

}  // namespace

std::vector<std::string> param_names(const ModelParams& params) {
  std::vector<std::string> names;
  if (is_two_neuron(params)) {
    for (const auto& f : kTwoFields) names.emplace_back(f.first);
  } else {
    for (const auto& f : kSingleFields) names.emplace_back(f.first);
  }
  return names;
}

double get_param(const ModelParams& params, const std::string& name) {
  if (const auto* two = std::get_if<TwoNeuronParams<>>(&params)) return two->*lookup(kTwoFields, name);
  return std::get<SingleNeuronParams<>>(params).*lookup(kSingleFields, name);
}

void set_param(ModelParams& params, const std::string& name, double value) {
  if (auto* two = std::get_if<TwoNeuronParams<>>(&params)) {
    two->*lookup(kTwoFields, name) = value;
    return;
  }
  std::get<SingleNeuronParams<>>(params).*lookup(kSingleFields, name) = value;
}

void validate(const ModelParams& params) {
  std::visit([](const auto& p) { p.validate(); }, params);
}

}  // namespace neuromod
