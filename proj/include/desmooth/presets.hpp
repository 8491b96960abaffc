#pragma once

#include <optional>
#include <string_view>

#include "desmooth/truncation.hpp"

namespace desmooth {

// Model-size tags for the bundled hyperparameter presets.
enum class ModelTag { Small, Med, Large, XL };

std::optional<ModelTag> model_tag_from_name(std::string_view name);
std::string_view model_tag_name(ModelTag tag);

// Default hyperparameter per (model size, rule kind). Top-k has no preset.
TruncationRule preset(ModelTag tag, TruncationKind kind);

}  // namespace desmooth
