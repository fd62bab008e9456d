#pragma once

#include <string>

#include "spectropt/grid.hpp"

namespace spectropt::io {

const char* library_version();

// Flat JSON {d, L, n, values[], mask[]}; fields omit the mask.
std::string field_to_json(const ScalarField& f);
std::string potential_to_json(const GeneralizedPotential& p);
ScalarField field_from_json(const std::string& text);
GeneralizedPotential potential_from_json(const std::string& text);

// CSV: node index, x, [y,] value
std::string field_to_csv(const ScalarField& f);

// d=2: heatmap; d=1: polyline. mask (optional) rendered as a separate layer.
std::string field_to_svg(const ScalarField& f,
                         const std::vector<std::uint8_t>* mask = nullptr);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace spectropt::io
