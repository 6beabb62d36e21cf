#include "lsbd/io.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lsbd::io {

using Json = nlohmann::ordered_json;

std::filesystem::path manifest_path(const std::filesystem::path& data_path) {
    std::filesystem::path p = data_path;
    p += ".manifest.json";
    return p;
}

std::string manifest_to_json(const Manifest& m) {
    Json j;
    j["schema_version"] = m.schema_version;
    j["kind"] = m.kind;
    Json factors = Json::array();
    for (const auto& f : m.fs.factors()) factors.push_back({{"name", f.name}, {"size", f.size}});
    j["factors"] = factors;
    if (m.latent_dim) j["latent_dim"] = *m.latent_dim;
    if (m.image) {
        j["image"] = {{"height", m.image->height},
                      {"width", m.image->width},
                      {"square_size", m.image->square_size},
                      {"dtype", "uint8"},
                      {"layout", "row-major N x H x W"}};
    }
    j["seed"] = m.seed;
    j["provenance"] = m.provenance;
    return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        Manifest m;
        m.schema_version = j.at("schema_version").get<std::string>();
        if (m.schema_version != kSchemaVersion) {
            throw FormatError("unsupported manifest schema_version '" + m.schema_version + "'");
        }
        m.kind = j.at("kind").get<std::string>();
        std::vector<Factor> factors;
        for (const auto& f : j.at("factors")) {
            factors.push_back({f.at("name").get<std::string>(), f.at("size").get<int>()});
        }
        m.fs = FactorStructure(std::move(factors));
        if (j.contains("latent_dim")) m.latent_dim = j["latent_dim"].get<int>();
        if (j.contains("image")) {
            const auto& im = j["image"];
            m.image = ImageDims{im.at("height").get<int>(), im.at("width").get<int>(),
                                im.value("square_size", 0)};
        }
        m.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("provenance")) m.provenance = j["provenance"].get<std::map<std::string, std::string>>();
        return m;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest(const std::filesystem::path& data_path, const Manifest& m) {
    write_file(manifest_path(data_path), manifest_to_json(m));
}

Manifest read_manifest(const std::filesystem::path& data_path) {
    return manifest_from_json(read_file(manifest_path(data_path)));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

namespace {

void append_shortest(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_fixed17(std::string& out, double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string cell_location(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col + 1);
}

}  // namespace

std::string encodings_to_csv(const EncodingGrid& grid) {
    const auto& fs = grid.factors();
    std::string out;
    for (int k = 0; k < fs.num_factors(); ++k) out += "g" + std::to_string(k) + ",";
    for (int d = 0; d < grid.latent_dim(); ++d) {
        out += "z" + std::to_string(d);
        out += d + 1 < grid.latent_dim() ? "," : "\n";
    }
    for (std::size_t i = 0; i < fs.total_size(); ++i) {
        const GroupIndex g = unflatten(i, fs);
        for (int k = 0; k < fs.num_factors(); ++k) out += std::to_string(g[k]) + ",";
        for (int d = 0; d < grid.latent_dim(); ++d) {
            append_shortest(out, grid.data()(static_cast<Eigen::Index>(i), d));
            out += d + 1 < grid.latent_dim() ? ',' : '\n';
        }
    }
    return out;
}

EncodingGrid encodings_from_csv(std::string_view text, const std::optional<FactorStructure>& fs) {
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw FormatError("encodings CSV is empty");

    const auto header = split(trim(lines[0]), ',');
    int num_factors = 0;
    int dim = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string_view h = trim(header[c]);
        const bool is_g = h.size() > 1 && h[0] == 'g';
        const bool is_z = h.size() > 1 && h[0] == 'z';
        int idx = -1;
        if ((!is_g && !is_z) || !parse_number(h.substr(1), idx)) {
            throw FormatError("bad header cell '" + std::string(h) + "' at " + cell_location(1, c));
        }
        if (is_g) {
            if (dim != 0 || idx != num_factors) throw FormatError("header must be g0,g1,...,z0,z1,...");
            ++num_factors;
        } else {
            if (idx != dim) throw FormatError("header must be g0,g1,...,z0,z1,...");
            ++dim;
        }
    }
    if (num_factors == 0 || dim == 0) throw FormatError("header needs at least one g column and one z column");
    if (fs && fs->num_factors() != num_factors) {
        throw FormatError("CSV has " + std::to_string(num_factors) + " index columns but the manifest lists " +
                          std::to_string(fs->num_factors()) + " factors");
    }

    const std::size_t rows = lines.size() - 1;
    std::vector<std::vector<int>> indices(rows, std::vector<int>(static_cast<std::size_t>(num_factors)));
    Matrix values(static_cast<Eigen::Index>(rows), dim);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t line_no = r + 2;
        const auto cells = split(trim(lines[r + 1]), ',');
        if (cells.size() != header.size()) {
            throw FormatError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(header.size()));
        }
        for (int k = 0; k < num_factors; ++k) {
            const auto c = static_cast<std::size_t>(k);
            if (!parse_number(cells[c], indices[r][c]) || indices[r][c] < 0) {
                throw FormatError("invalid group index '" + std::string(trim(cells[c])) + "' at " +
                                  cell_location(line_no, c));
            }
        }
        for (int d = 0; d < dim; ++d) {
            const auto c = static_cast<std::size_t>(num_factors + d);
            double v = 0.0;
            if (!parse_number(cells[c], v)) {
                throw FormatError("non-numeric value '" + std::string(trim(cells[c])) + "' at " +
                                  cell_location(line_no, c));
            }
            if (!std::isfinite(v)) {
                throw FormatError("non-finite value '" + std::string(trim(cells[c])) + "' at " +
                                  cell_location(line_no, c));
            }
            values(static_cast<Eigen::Index>(r), d) = v;
        }
    }

    FactorStructure structure;
    if (fs) {
        structure = *fs;
    } else {
        std::vector<int> sizes(static_cast<std::size_t>(num_factors), 0);
        for (const auto& idx : indices) {
            for (std::size_t k = 0; k < idx.size(); ++k) sizes[k] = std::max(sizes[k], idx[k] + 1);
        }
        structure = FactorStructure::from_sizes(sizes);
    }
    if (rows != structure.total_size()) {
        throw FormatError("CSV has " + std::to_string(rows) + " data rows but the factor grid has " +
                          std::to_string(structure.total_size()) + " points");
    }

    Matrix data(static_cast<Eigen::Index>(rows), dim);
    std::vector<bool> seen(rows, false);
    for (std::size_t r = 0; r < rows; ++r) {
        const GroupIndex g{indices[r]};
        if (!is_valid(g, structure)) {
            throw FormatError("group index out of range on line " + std::to_string(r + 2));
        }
        const std::size_t flat = flat_index(g, structure);
        if (seen[flat]) throw FormatError("duplicate grid point on line " + std::to_string(r + 2));
        seen[flat] = true;
        data.row(static_cast<Eigen::Index>(flat)) = values.row(static_cast<Eigen::Index>(r));
    }
    return EncodingGrid(std::move(structure), std::move(data));
}

void write_images(const std::filesystem::path& path, const ImageGrid& images) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(images.pixels.data()), images.pixels.size()));
}

ImageGrid read_images(const std::filesystem::path& path, const Manifest& manifest) {
    if (manifest.kind != "images" || !manifest.image) throw FormatError("manifest does not describe images");
    const std::string bytes = read_file(path);
    ImageGrid out{manifest.fs, manifest.image->height, manifest.image->width, {}};
    if (out.height < 1 || out.width < 1) throw FormatError("manifest has invalid image dimensions");
    const std::size_t expected = out.fs.total_size() * out.image_bytes();
    if (bytes.size() != expected) {
        throw FormatError("image file has " + std::to_string(bytes.size()) + " bytes, manifest implies " +
                          std::to_string(expected));
    }
    out.pixels.assign(bytes.begin(), bytes.end());
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (const auto part : split(text, ',')) {
        int v = 0;
        if (!parse_number(part, v)) throw FormatError("expected an integer, got '" + std::string(trim(part)) + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<OmegaInterval> parse_omega_range(std::string_view text, int num_factors) {
    std::vector<OmegaInterval> out;
    for (const auto part : split(text, ',')) {
        const auto bounds = split(part, ':');
        OmegaInterval iv;
        if (bounds.size() != 2 || !parse_number(bounds[0], iv.lo) || !parse_number(bounds[1], iv.hi)) {
            throw FormatError("frequency interval must look like a:b, got '" + std::string(part) + "'");
        }
        if (iv.hi < iv.lo) throw FormatError("empty frequency interval '" + std::string(part) + "'");
        out.push_back(iv);
    }
    if (out.size() == 1 && num_factors > 1) out.assign(static_cast<std::size_t>(num_factors), out[0]);
    if (static_cast<int>(out.size()) != num_factors) {
        throw FormatError("got " + std::to_string(out.size()) + " frequency intervals for " +
                          std::to_string(num_factors) + " factors");
    }
    return out;
}

namespace {

std::string json_string(std::string_view s) { return Json(std::string(s)).dump(); }

void append_int_array(std::string& out, const std::vector<int>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(values[i]);
    }
    out += ']';
}

}  // namespace

std::string report_to_json(const ReportDocument& doc) {
    const LsbdReport& r = doc.report;
    std::string out = "{\n";
    out += "  \"schema_version\": " + json_string(kSchemaVersion) + ",\n";
    out += "  \"tool\": \"lsbd\",\n";
    out += "  \"tool_version\": " + json_string(kToolVersion) + ",\n";
    out += "  \"input\": {\"name\": " + json_string(doc.input_name) + ", \"sha256\": " + json_string(doc.input_sha256) + "},\n";
    out += "  \"factors\": [";
    for (int k = 0; k < doc.fs.num_factors(); ++k) {
        if (k) out += ", ";
        out += "{\"name\": " + json_string(doc.fs.name(k)) + ", \"size\": " + std::to_string(doc.fs.size(k)) + "}";
    }
    out += "],\n";
    out += "  \"latent_dim\": " + std::to_string(doc.latent_dim) + ",\n";
    out += "  \"num_points\": " + std::to_string(doc.fs.total_size()) + ",\n";
    out += std::string("  \"whitening\": ") + (r.whitening ? "true" : "false") + ",\n";
    out += "  \"omega_range\": [";
    for (std::size_t k = 0; k < r.omega_range.size(); ++k) {
        if (k) out += ", ";
        out += "[" + std::to_string(r.omega_range[k].lo) + ", " + std::to_string(r.omega_range[k].hi) + "]";
    }
    out += "],\n";
    out += "  \"table_size\": " + std::to_string(r.table.size()) + ",\n";
    out += "  \"best_frequency\": ";
    append_int_array(out, r.best_frequency.omegas);
    out += ",\n  \"l_lsbd\": ";
    append_fixed17(out, r.l_lsbd);
    if (doc.duration_seconds) {
        out += ",\n  \"duration_seconds\": ";
        append_fixed17(out, *doc.duration_seconds);
    }
    if (doc.full_table) {
        out += ",\n  \"table\": [";
        for (std::size_t i = 0; i < r.table.size(); ++i) {
            out += i ? ",\n    " : "\n    ";
            out += "{\"omega\": ";
            append_int_array(out, r.table[i].omega.omegas);
            out += ", \"loss\": ";
            append_fixed17(out, r.table[i].loss);
            out += "}";
        }
        out += "\n  ]";
    }
    out += "\n}\n";
    return out;
}

}  // namespace lsbd::io
