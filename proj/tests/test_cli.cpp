#include "cli_runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>

using cli_runner::Sandbox;
using cli_runner::slurp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("generate square writes raw images and a manifest") {
    Sandbox box;
    const auto r = box.run({"generate", "--dataset", "square", "--sizes", "64,64", "-o", "sq.bin"});
    REQUIRE(r.code == 0);
    CHECK(fs::file_size(box.path("sq.bin")) == 4096u * 64u * 64u);
    const json m = json::parse(slurp(box.path("sq.bin.manifest.json")));
    CHECK(m["kind"] == "images");
    CHECK(m["schema_version"] == "1");
}

TEST_CASE("small square pipeline") {
    Sandbox box;
    REQUIRE(box.run({"generate", "--dataset", "square", "--sizes", "16,16", "--image-size", "16", "--square-size",
                     "4", "-o", "sq.bin"})
                .code == 0);
    REQUIRE(box.run({"encode", "--method", "pca", "--dim", "4", "-i", "sq.bin", "-o", "enc.csv"}).code == 0);
    const std::string csv = slurp(box.path("enc.csv"));
    CHECK(count_lines(csv) == 257);
    CHECK(csv.rfind("g0,g1,z0,z1,z2,z3\n", 0) == 0);

    const auto first = box.run({"evaluate", "-i", "enc.csv", "-o", "report.json"});
    REQUIRE(first.code == 0);
    CHECK(slurp(box.path("report.json")) == first.out);
    const auto second = box.run({"evaluate", "-i", "enc.csv"}, "LSBD_THREADS=3");
    CHECK(second.out == first.out);
    const json report = json::parse(first.out);
    CHECK(report["input"]["name"] == "enc.csv");
    CHECK(report["latent_dim"] == 4);
    CHECK(report["table_size"] == 441);

    CHECK(box.run({"encode", "--dim", "5000", "-i", "sq.bin", "-o", "big.csv"}).code == 2);
    CHECK(box.run({"encode", "--method", "vae", "-i", "sq.bin", "-o", "x.csv"}).code == 2);
}

TEST_CASE("perfect embedding through the CLI") {
    Sandbox box;
    REQUIRE(box.run({"generate", "--dataset", "perfect", "--sizes", "32,16", "-o", "p.csv"}).code == 0);
    CHECK(count_lines(slurp(box.path("p.csv"))) == 513);

    const auto r = box.run({"evaluate", "-i", "p.csv", "--full-table"});
    REQUIRE(r.code == 0);
    const json report = json::parse(r.out);
    CHECK(report["l_lsbd"].get<double>() <= 1e-10);
    CHECK(report["best_frequency"] == json::array({1, 1}));
    CHECK(report["table"].size() == 441);
    CHECK_FALSE(report.contains("duration_seconds"));

    const json single = json::parse(box.run({"evaluate", "-i", "p.csv", "--omega-range", "0:0"}).out);
    CHECK(single["table_size"] == 1);
    CHECK(single["best_frequency"] == json::array({0, 0}));

    const json timed = json::parse(box.run({"evaluate", "-i", "p.csv", "--timing", "--whitening"}).out);
    CHECK(timed["duration_seconds"].get<double>() >= 0.0);
    CHECK(timed["whitening"] == true);

    REQUIRE(box.run({"generate", "--dataset", "perfect", "--sizes", "2,2", "-o", "tiny.csv"}).code == 0);
    const auto wide = box.run({"evaluate", "-i", "tiny.csv", "--omega-range", "-600:600"});
    CHECK(wide.code == 0);
    CHECK(wide.err.find("warning") != std::string::npos);
}

TEST_CASE("seeded generation is byte-identical") {
    Sandbox box;
    for (const char* name : {"a.csv", "b.csv"}) {
        REQUIRE(box.run({"generate", "--dataset", "noisy", "--sizes", "8,8", "--noise", "0.2", "--transform",
                         "--seed", "42", "-o", name})
                    .code == 0);
    }
    REQUIRE(box.run({"generate", "--dataset", "noisy", "--sizes", "8,8", "--noise", "0.2", "--transform", "--seed",
                     "43", "-o", "c.csv"})
                .code == 0);
    CHECK(slurp(box.path("a.csv")) == slurp(box.path("b.csv")));
    CHECK(slurp(box.path("a.csv.manifest.json")) == slurp(box.path("b.csv.manifest.json")));
    CHECK(slurp(box.path("a.csv")) != slurp(box.path("c.csv")));
    json ra = json::parse(box.run({"evaluate", "-i", "a.csv"}).out);
    json rb = json::parse(box.run({"evaluate", "-i", "b.csv"}).out);
    CHECK(rb["input"]["name"] == "b.csv");
    rb["input"]["name"] = "a.csv";
    CHECK(ra == rb);
}

TEST_CASE("exit codes") {
    Sandbox box;
    CHECK(box.run({"--help"}).code == 0);
    CHECK(box.run({"--version"}).code == 0);
    CHECK(box.run({}).code == 2);
    CHECK(box.run({"frobnicate"}).code == 2);
    CHECK(box.run({"generate", "--dataset", "spiral", "-o", "x.csv"}).code == 2);
    CHECK(box.run({"generate", "--dataset", "perfect", "--sizes", "4,x", "-o", "x.csv"}).code == 2);

    const auto missing = box.run({"evaluate", "-i", "nope.csv"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("nope.csv") != std::string::npos);
    CHECK(box.run({"encode", "-i", "nope.bin", "-o", "x.csv"}).code == 1);
    CHECK(box.run({"generate", "--dataset", "perfect", "-o", "no/such/dir/x.csv"}).code == 1);

    {
        std::ofstream bad(box.path("bad.csv"));
        bad << "g0,z0,z1\n0,1,2\n1,nan,3\n2,1,1\n";
    }
    const auto nan = box.run({"evaluate", "-i", "bad.csv"});
    CHECK(nan.code == 2);
    CHECK(nan.err.find("line 3, column 2") != std::string::npos);

    REQUIRE(box.run({"generate", "--dataset", "perfect", "--sizes", "4,4", "-o", "p.csv"}).code == 0);
    CHECK(box.run({"evaluate", "-i", "p.csv", "--omega-range", "3:1"}).code == 2);
    CHECK(box.run({"evaluate", "-i", "p.csv", "--omega-range", "0:1,0:1,0:1"}).code == 2);
}
