#include "lsbd/cli.hpp"

#include "lsbd/data_gen.hpp"
#include "lsbd/io.hpp"
#include "lsbd/metric.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

namespace lsbd::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kLargeSearchWarning = 1'000'000;

struct GenerateArgs {
    std::string dataset;
    std::string sizes = "64,64";
    std::string freqs;
    double noise = -1.0;
    bool transform = false;
    int image_size = 64;
    int square_size = 8;
    std::uint64_t seed = 0;
    std::string output;
};

struct EncodeArgs {
    std::string method = "pca";
    int dim = 4;
    std::string input;
    std::string output;
};

struct EvaluateArgs {
    std::string input;
    std::string omega_range = "-10:10";
    bool whitening = false;
    bool full_table = false;
    bool timing = false;
    std::string output;
};

std::string format_real(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

unsigned thread_budget() {
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LSBD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return std::min(hw, static_cast<unsigned>(v));
    }
    return hw;
}

int do_generate(const GenerateArgs& a, std::ostream& err) {
    const std::vector<int> sizes = io::parse_int_list(a.sizes);
    const fs::path out_path = a.output;
    io::Manifest m;
    m.seed = a.seed;
    m.provenance["generator"] = a.dataset;

    if (a.dataset == "square") {
        if (sizes.size() != 2) throw io::FormatError("the square dataset has exactly two factors");
        const ImageGrid images = gen_square_translation(sizes[0], sizes[1], a.image_size, a.square_size);
        m.kind = "images";
        m.fs = images.fs;
        m.image = io::ImageDims{images.height, images.width, a.square_size};
        io::write_images(out_path, images);
        io::write_manifest(out_path, m);
        return kExitOk;
    }
    if (a.dataset != "perfect" && a.dataset != "noisy") {
        err << "error: unknown dataset '" << a.dataset << "'\n";
        return kExitUsage;
    }

    const FactorStructure structure = FactorStructure::from_sizes(sizes);
    EmbeddingParams params;
    params.seed = a.seed;
    params.frequencies.omegas =
        a.freqs.empty() ? std::vector<int>(sizes.size(), 1) : io::parse_int_list(a.freqs);
    if (params.frequencies.size() != structure.num_factors()) {
        throw io::FormatError("--freqs needs one frequency per factor");
    }
    params.noise_sigma = a.noise >= 0.0 ? a.noise : (a.dataset == "noisy" ? 0.1 : 0.0);
    if (a.transform) params.linear_transform = gen_random_invertible(2 * structure.num_factors(), a.seed);

    const EncodingGrid grid = gen_perfect_embedding(structure, params);
    m.kind = "encodings";
    m.fs = structure;
    m.latent_dim = grid.latent_dim();
    m.provenance["frequencies"] = a.freqs.empty() ? "1" : a.freqs;
    m.provenance["noise_sigma"] = format_real(params.noise_sigma);
    m.provenance["linear_transform"] = a.transform ? "random (seeded)" : "none";
    io::write_file(out_path, io::encodings_to_csv(grid));
    io::write_manifest(out_path, m);
    return kExitOk;
}

int do_encode(const EncodeArgs& a) {
    if (a.method != "pca") throw io::FormatError("unknown encoding method '" + a.method + "'");
    const fs::path in_path = a.input;
    if (!fs::exists(in_path)) throw io::IoError("input file '" + a.input + "' does not exist");
    const io::Manifest in_manifest = io::read_manifest(in_path);
    const ImageGrid images = io::read_images(in_path, in_manifest);
    const EncodingGrid grid = encode_images_pca(images, a.dim);

    io::Manifest m;
    m.kind = "encodings";
    m.fs = grid.factors();
    m.latent_dim = grid.latent_dim();
    m.seed = in_manifest.seed;
    m.provenance["encoder"] = "pca";
    m.provenance["source"] = in_path.filename().string();
    const fs::path out_path = a.output;
    io::write_file(out_path, io::encodings_to_csv(grid));
    io::write_manifest(out_path, m);
    return kExitOk;
}

int do_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path in_path = a.input;
    const std::string text = io::read_file(in_path);
    std::optional<FactorStructure> structure;
    if (fs::exists(io::manifest_path(in_path))) {
        const io::Manifest m = io::read_manifest(in_path);
        if (m.kind != "encodings") throw io::FormatError("manifest does not describe encodings");
        structure = m.fs;
    }
    const EncodingGrid grid = io::encodings_from_csv(text, structure);

    EvaluateOptions options;
    options.omega_range = io::parse_omega_range(a.omega_range, grid.factors().num_factors());
    options.whitening = a.whitening;
    options.threads = thread_budget();
    if (frequency_count(options.omega_range) > kLargeSearchWarning) {
        err << "warning: searching " << frequency_count(options.omega_range)
            << " frequency vectors; this may take a while\n";
    }

    io::ReportDocument doc;
    doc.report = evaluate(grid, options);
    doc.input_name = in_path.filename().string();
    doc.input_sha256 = io::sha256_hex(text);
    doc.fs = grid.factors();
    doc.latent_dim = grid.latent_dim();
    doc.full_table = a.full_table;
    if (a.timing) {
        doc.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    const std::string json = io::report_to_json(doc);
    if (!a.output.empty()) io::write_file(a.output, json);
    out << json;
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear symmetry-based disentanglement (LSBD) metric tools"};
    app.set_version_flag("--version", std::string(io::kToolVersion));
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset and its manifest");
    generate->add_option("--dataset", gen.dataset, "square | perfect | noisy")->required();
    generate->add_option("--sizes", gen.sizes, "Comma-separated factor sizes")->capture_default_str();
    generate->add_option("--freqs", gen.freqs, "Per-factor circle frequencies (perfect/noisy)");
    generate->add_option("--noise", gen.noise, "Gaussian noise scale (default 0, or 0.1 for noisy)");
    generate->add_flag("--transform", gen.transform, "Apply a seeded random invertible linear map");
    generate->add_option("--image-size", gen.image_size, "Square image side (square)")->capture_default_str();
    generate->add_option("--square-size", gen.square_size, "White square side (square)")->capture_default_str();
    generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    generate->add_option("--output,-o", gen.output, "Data file to write")->required();

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Encode an image dataset into latent vectors");
    encode->add_option("--method", enc.method, "Encoder (pca)")->capture_default_str();
    encode->add_option("--dim", enc.dim, "Latent dimension")->capture_default_str();
    encode->add_option("--input,-i", enc.input, "Image data file")->required();
    encode->add_option("--output,-o", enc.output, "Encodings CSV to write")->required();

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compute the LSBD upper bound of an encodings CSV");
    evaluate_cmd->add_option("--input,-i", ev.input, "Encodings CSV")->required();
    evaluate_cmd->add_option("--omega-range", ev.omega_range, "a:b or a:b,c:d,... per factor")
        ->capture_default_str()
        ->allow_extra_args(false);
    evaluate_cmd->add_flag("--whitening", ev.whitening, "Whiten the principal coordinates");
    evaluate_cmd->add_flag("--full-table", ev.full_table, "Include every (omega, loss) entry");
    evaluate_cmd->add_flag("--timing", ev.timing, "Include wall-clock duration in the report");
    evaluate_cmd->add_option("--output,-o", ev.output, "Also write the report to this file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) return do_generate(gen, err);
        if (encode->parsed()) return do_encode(enc);
        return do_evaluate(ev, out, err);
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const io::FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace lsbd::cli
