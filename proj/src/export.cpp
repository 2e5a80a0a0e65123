#include "patchwork/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <boost/crc.hpp>

namespace patchwork {

OutputFormat parse_output_format(std::string_view name) {
  if (name == "pgm") return OutputFormat::pgm;
  if (name == "csv") return OutputFormat::csv;
  if (name == "raw-rational") return OutputFormat::raw_rational;
  throw std::invalid_argument("unknown format '" + std::string(name) +
                              "' (expected pgm, csv or raw-rational)");
}

std::string_view format_name(OutputFormat format) {
  switch (format) {
    case OutputFormat::pgm: return "pgm";
    case OutputFormat::csv: return "csv";
    case OutputFormat::raw_rational: return "raw-rational";
  }
  return "";
}

std::string_view format_extension(OutputFormat format) {
  switch (format) {
    case OutputFormat::pgm: return ".pgm";
    case OutputFormat::csv: return ".csv";
    case OutputFormat::raw_rational: return ".txt";
  }
  return "";
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into '" + path.string() + "'");
  }
}

HeightSummary summarize(const std::vector<double>& values) {
  if (values.empty()) {
    return {};
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

std::vector<std::uint16_t> normalize_heights(const std::vector<double>& values) {
  const HeightSummary range = summarize(values);
  std::vector<std::uint16_t> out(values.size(), 0);
  const double span = range.max - range.min;
  if (!(span > 0.0)) {
    return out;
  }
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double scaled = std::floor((values[n] - range.min) / span * 65535.0 + 0.5);
    out[n] = static_cast<std::uint16_t>(std::clamp(scaled, 0.0, 65535.0));
  }
  return out;
}

std::string render_pgm(const std::vector<double>& values, std::size_t nu, std::size_t nv,
                       std::string_view comment) {
  if (values.size() != nu * nv) {
    throw std::invalid_argument("render_pgm: value count does not match nu * nv");
  }
  const auto pixels = normalize_heights(values);
  std::string out = "P2\n";
  if (!comment.empty()) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  out += std::to_string(nu) + " " + std::to_string(nv) + "\n65535\n";
  for (std::size_t r = 0; r < nv; ++r) {
    const std::size_t j = nv - 1 - r;
    for (std::size_t i = 0; i < nu; ++i) {
      if (i != 0) {
        out += ' ';
      }
      out += std::to_string(pixels[i * nv + j]);
    }
    out += '\n';
  }
  return out;
}

std::string render_pgm(const SurfaceGrid& grid) {
  char exponent[32];
  std::snprintf(exponent, sizeof exponent, "%.6f", grid.roughness_exponent());
  std::string comment = "patchwork op=" + to_literal(grid.op()) + " q=" +
                        std::to_string(grid.q()) + " H=" + exponent;
  if (grid.coarse_depth()) {
    comment += " D=" + std::to_string(*grid.coarse_depth());
  }
  return render_pgm(grid.values(), grid.resolution().nu, grid.resolution().nv, comment);
}

namespace {

template <typename Format>
std::string render_table(const SurfaceGrid& grid, Format&& number) {
  std::ostringstream out;
  out << "u,v,value\n";
  const Resolution res = grid.resolution();
  std::vector<std::string> v_text;
  v_text.reserve(res.nv);
  for (std::size_t j = 0; j < res.nv; ++j) {
    v_text.push_back(number(grid.field().v_operand(j).value()));
  }
  for (std::size_t i = 0; i < res.nu; ++i) {
    const std::string u_text = number(grid.field().u_operand(i).value());
    for (std::size_t j = 0; j < res.nv; ++j) {
      out << u_text << ',' << v_text[j] << ',' << number(grid.exact_value(i, j)) << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string render_csv(const SurfaceGrid& grid, int frac_digits) {
  return render_table(grid, [frac_digits](const Rational& x) {
    return to_decimal_string(x, frac_digits);
  });
}

std::string render_raw_rational(const SurfaceGrid& grid) {
  return render_table(grid, [](const Rational& x) { return to_fraction_string(x); });
}

std::string render(const SurfaceGrid& grid, OutputFormat format, int frac_digits) {
  switch (format) {
    case OutputFormat::pgm: return render_pgm(grid);
    case OutputFormat::csv: return render_csv(grid, frac_digits);
    case OutputFormat::raw_rational: return render_raw_rational(grid);
  }
  throw std::invalid_argument("unknown output format");
}

std::uint32_t checksum(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

}  // namespace patchwork
