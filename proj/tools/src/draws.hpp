#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhlab/constants.hpp"
#include "hhlab/function_space.hpp"
#include "hhlab/kernel.hpp"
#include "hhlab/verifier.hpp"

namespace hhlab::suite {

// Name and parameters of a kernel as written in a config.
struct KernelSpec {
  std::string name;
  double lambda = 1.0;
  std::optional<double> beta;
  std::optional<double> at_zero;      // piecewise-power only
  std::optional<double> at_infinity;  // piecewise-power only
};

Kernel make_kernel(const KernelSpec& spec);

enum class CheckKind {
  BilinearIntegral,
  EquivalentIntegral,
  BilinearDiscrete,
  EquivalentDiscrete,
  HardyIntegral,
  HardyDiscrete,
};

std::string_view to_string(CheckKind kind);
std::optional<CheckKind> check_kind_from_name(std::string_view name);
bool is_discrete(CheckKind kind);

// One fully specified verification run.
struct Instance {
  std::string label;
  CheckKind kind = CheckKind::BilinearIntegral;
  KernelSpec kernel;
  ExponentConfig cfg;
  std::optional<FormKind> form;
  std::optional<Direction> cumulative;
  HardyDirection hardy = HardyDirection::Forward;
  TestFunction f;
  TestFunction g;
  TestSequence a;
  TestSequence b;
};

VerificationReport run_instance(const Instance& inst, const VerifyOptions& options);

// Families of random instances, one per inequality.
enum class Family {
  BilinearRS,
  EquivalentRS,
  BilinearAlphaBeta,
  EquivalentAlphaBeta,
  BilinearWeighted,
  EquivalentWeighted,
  ReverseBilinearRS,
  ReverseEquivalentRS,
  ReverseBilinearWeighted,
  ReverseEquivalentWeighted,
  DiscreteBilinearRS,
  DiscreteEquivalentRS,
  DiscreteBilinearWeighted,
  DiscreteEquivalentWeighted,
  HardyIntegral,
  HardyDiscrete,
};

std::string_view to_string(Family family);
std::optional<Family> family_from_name(std::string_view name);
const std::vector<Family>& all_families();
// Exponents p the family is drawn at by default.
std::vector<double> default_exponents(Family family);

Instance draw_instance(Rng& rng, Family family, double p);

}  // namespace hhlab::suite
