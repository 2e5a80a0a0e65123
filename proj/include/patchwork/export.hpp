#pragma once

// Heightmap and table writers. All output is deterministic text; files are
// written to a temporary sibling and renamed into place.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "patchwork/rational.hpp"
#include "patchwork/surface.hpp"

namespace patchwork {

enum class OutputFormat { pgm, csv, raw_rational };

OutputFormat parse_output_format(std::string_view name);
std::string_view format_name(OutputFormat format);
/// ".pgm", ".csv" or ".txt".
std::string_view format_extension(OutputFormat format);

/// Writes content to path via write-temp-then-rename. Throws
/// std::runtime_error naming the path on failure.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Affine map of [min, max] onto [0, 65535]; a constant grid maps to 0.
std::vector<std::uint16_t> normalize_heights(const std::vector<double>& values);

/// ASCII P2, maxval 65535, one image row per line. Pixel (row r, column c)
/// shows sample i = c, j = nv - 1 - r, so v grows upward and u to the right.
std::string render_pgm(const std::vector<double>& values, std::size_t nu, std::size_t nv,
                       std::string_view comment = {});
std::string render_pgm(const SurfaceGrid& grid);

/// Header "u,v,value"; coordinates are the evaluated operands and values
/// the exact samples, all printed with frac_digits truncated decimals.
std::string render_csv(const SurfaceGrid& grid, int frac_digits = 12);

/// Same layout as the CSV but every number as an exact fraction "n/d".
std::string render_raw_rational(const SurfaceGrid& grid);

std::string render(const SurfaceGrid& grid, OutputFormat format, int frac_digits = 12);

struct HeightSummary {
  double min = 0.0;
  double max = 0.0;
};
HeightSummary summarize(const std::vector<double>& values);

/// CRC-32 of a byte string, used for golden-file manifests.
std::uint32_t checksum(std::string_view bytes);

}  // namespace patchwork
