#pragma once

#include "lsbd/data_gen.hpp"
#include "lsbd/metric.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lsbd::io {

/// Malformed content: bad CSV cells, inconsistent manifests, bad option values.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The file system refused: missing file, unwritable path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kSchemaVersion = "1";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct ImageDims {
    int height = 0;
    int width = 0;
    int square_size = 0;
};

/// Sidecar JSON describing a data file (`<data>.manifest.json`).
struct Manifest {
    std::string schema_version{kSchemaVersion};
    std::string kind;  // "images" or "encodings"
    FactorStructure fs;
    std::optional<int> latent_dim;
    std::optional<ImageDims> image;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> provenance;
};

std::filesystem::path manifest_path(const std::filesystem::path& data_path);

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(std::string_view text);
void write_manifest(const std::filesystem::path& data_path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& data_path);

/// Encodings CSV: header g0,...,g{K-1},z0,...,z{D-1}; one row per grid point in
/// row-major order; latents in shortest round-trip decimal form.
std::string encodings_to_csv(const EncodingGrid& grid);
/// Rows may come in any order but each grid point must appear exactly once.
/// Without `fs`, factor sizes are inferred as (max index + 1).
EncodingGrid encodings_from_csv(std::string_view text, const std::optional<FactorStructure>& fs = std::nullopt);

void write_images(const std::filesystem::path& path, const ImageGrid& images);
ImageGrid read_images(const std::filesystem::path& path, const Manifest& manifest);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view bytes);

/// "a:b" or "a:b,c:d,...". A single interval is broadcast to all factors.
std::vector<OmegaInterval> parse_omega_range(std::string_view text, int num_factors);
std::vector<int> parse_int_list(std::string_view text);

struct ReportDocument {
    LsbdReport report;
    std::string input_name;
    std::string input_sha256;
    FactorStructure fs;
    int latent_dim = 0;
    bool full_table = false;
    std::optional<double> duration_seconds;
};

/// Report JSON with fields in fixed order and reals printed with 17 significant digits.
std::string report_to_json(const ReportDocument& doc);

}  // namespace lsbd::io
