#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldmd/core.hpp"

namespace ldmd {

enum class Preset { Test0Diffusion, Test0Advection, Test1, Test2, Test3, Test4, LevelSet, Custom };

std::string to_string(Preset p);
Preset preset_from_string(const std::string& name);
const std::vector<Preset>& all_presets();

/// Figure/table of the reproduced experiment, for manifests.
std::string preset_description(Preset p);

/// 0.5 exp(-((x - 0.3)/0.05)^2), shared by the Gaussian-pulse experiments.
double gaussian_pulse(double x);

/// Full-scale problems use N = 2000 values and M = 1000 steps on [0, 1];
/// `scale` divides both, keeping the Courant number fixed.
ProblemSpec preset_problem(Preset p, int scale = 1);

/// Default training size (250 / scale) and energy threshold per preset.
int preset_training_count(Preset p, int scale = 1);
double preset_epsilon(Preset p);
/// Fixed ranks used by the Eulerian demonstrations (empty elsewhere).
std::vector<int> preset_fixed_ranks(Preset p);

}  // namespace ldmd
