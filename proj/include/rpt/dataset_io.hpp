#pragma once

#include <string>

#include "rpt/dataset.hpp"

namespace rpt {

enum class DatasetFormat { csv, binary };

DatasetFormat dataset_format_from_name(const std::string& name);

// Binary dataset format ("PDAT"), little-endian:
//   magic 4 bytes "PDAT", version u16 (= 1), n u64, d u32,
//   then n*d f64 values, row-major.
// CSV: one point per line, comma-separated; an optional header row
// ("x1,...,xd") is skipped. Values are written with enough digits to
// round-trip exactly.
Dataset load_dataset(const std::string& path, DatasetFormat format);
void save_dataset(const Dataset& data, const std::string& path, DatasetFormat format);

}  // namespace rpt
