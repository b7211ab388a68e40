#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "scenkit/config.hpp"
#include "scenkit/core_model.hpp"

namespace scenkit {

inline constexpr int kAttributeCount = 13;
using WeightVector = std::array<double, kAttributeCount>;

struct AttributeVector {
  int frame = 0;
  std::array<double, kAttributeCount> a{};  // a[0] is attribute 1

  double operator[](int attribute) const { return a[static_cast<std::size_t>(attribute - 1)]; }
};

struct ComplexityScore {
  double value = 0.0;
  int argmax_frame = 0;
  std::size_t argmax_index = 0;
  std::vector<double> series;  // wᵀa per scene
};

enum class ComplexityClass { low, medium, high };
std::string_view to_string(ComplexityClass c);

WeightVector default_weights();
/// Throws ConfigError unless weights are non-negative and sum to 1 within 1e-12.
void validate_weights(const WeightVector& w);

/// Scenario-level attributes 4, 11 and 13, shared by every scene.
struct ScenarioConstants {
  double a4 = 0.0;
  double a11 = 0.0;
  double a13 = 0.0;
};
ScenarioConstants scenario_constants(const Scenario& scenario, const PipelineConfig& cfg = {});

AttributeVector attribute_vector(const Scenario& scenario, std::size_t scene_index,
                                 const PipelineConfig& cfg = {});
/// Same, reusing precomputed scenario constants.
AttributeVector attribute_vector(const Scenario& scenario, std::size_t scene_index,
                                 const ScenarioConstants& constants, const PipelineConfig& cfg);

std::vector<AttributeVector> attribute_matrix(const Scenario& scenario,
                                              const PipelineConfig& cfg = {});

/// Peak weighted sum over a precomputed attribute matrix. Throws ArgumentError when empty.
ComplexityScore complexity_from_attributes(std::span<const AttributeVector> attributes,
                                           const WeightVector& w);

ComplexityScore scenario_complexity(const Scenario& scenario, const WeightVector& w,
                                    const PipelineConfig& cfg = {});

/// Throws ArgumentError outside [0, 1].
ComplexityClass complexity_class(double value);

/// Fraction of the symmetric ray fan from `origin` that hits a box before
/// leaving `roi`. Rays are cast in mirrored pairs at (k + 1/2) degree offsets.
double occluded_fraction(double origin_x, double origin_y, const Box& roi,
                         std::span<const Box> obstacles, int rays);

}  // namespace scenkit
