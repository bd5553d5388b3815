#pragma once

#include <string>

#include "core/cartogram.hpp"
#include "core/grid.hpp"

namespace latcart {

// FieldFile: magic "LCF1", u32 LE header length, UTF-8 JSON header
// {kind, shape, bounds, dist (meaning only)}, then row-major 64-bit LE
// IEEE-754 payload (axis 1 outermost, component axis innermost).
// Saves are atomic (write-to-temporary, rename) and reject non-finite
// values; loads are validated byte for byte.

enum class FieldKind { meaning, measure, transform };

FieldKind probe_field(const std::string& path);

void save_field(const std::string& path, const MeaningField& f);
void save_field(const std::string& path, const MeasureField& f);
void save_field(const std::string& path, const TransformField& f);

MeaningField load_meaning(const std::string& path);
MeasureField load_measure(const std::string& path);
TransformField load_transform(const std::string& path);

// EmbeddingsFile: UTF-8 CSV, header "z1,z2" or "z1,z2,label", one point per
// row, coordinates in the shortest representation that parses back to the
// same 64-bit value.
void save_embeddings(const std::string& path, const EmbeddingSet& e);
EmbeddingSet load_embeddings(const std::string& path);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace latcart
