#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "qchrome/hierarchy.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "qchrome");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = qchrome::cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::vector<std::string> graph_lines(const std::string& s) {
    std::vector<std::string> v;
    for (auto& l : lines(s))
        if (!l.empty() && l[0] != '#') v.push_back(l);
    return v;
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("qchrome_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const std::string kData = QCHROME_DATA_DIR;
const std::string kG21 = "TX_ac~QhaBO_TDaO@dDewW_gCd?WWI_c[?lg";

}  // namespace

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"critgen", "-n", "5"}).code == 2);
    CHECK(run({"critgen", "-n", "5", "-k", "4", "--split", "3/2"}).code == 2);
    CHECK(run({"critgen", "-n", "5", "-k", "4", "--split", "x"}).code == 2);
    CHECK(run({"critgen", "-n", "5", "-k", "1"}).code == 2);
    CHECK(run({"xi-sdp", "C~", "--eps", "2"}).code == 2);
    CHECK(run({"xi-sdp", "C~", "--tol", "-1"}).code == 2);
    CHECK(run({"chromatic", "zz!"}).code == 2);
    CHECK(run({"orthrank", "C~"}).code == 2);
    CHECK(run({"orthrank", "C~", "-k", "1"}).code == 2);
    CHECK(run({"clump-graph", "/nonexistent/file.json"}).code == 2);
    CHECK(run({"clump-graph", "-"}, "[{]").code == 2);
    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("pipeline") != std::string::npos);
}

TEST_CASE("critgen") {
    auto r = run({"critgen", "-n", "8", "-k", "4"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 7);
    CHECK(ls.back() == "# count 5");
    auto header = json::parse(ls.front().substr(std::string("# qchrome critgen ").size()));
    CHECK(header["n"] == 8);
    CHECK(header["k"] == 4);
    CHECK(header["format_version"] == 1);

    auto a = graph_lines(run({"critgen", "-n", "9", "-k", "4", "--sorted"}).out);
    auto b = graph_lines(run({"critgen", "-n", "9", "-k", "4", "--workers", "3", "--sorted"}).out);
    CHECK(a.size() == 21);
    CHECK(a == b);

    // residue classes partition the output
    std::vector<std::string> joined;
    for (int i = 0; i < 3; ++i) {
        auto part = graph_lines(run({"critgen", "-n", "9", "-k", "4", "--split", std::to_string(i) + "/3"}).out);
        joined.insert(joined.end(), part.begin(), part.end());
    }
    std::sort(joined.begin(), joined.end());
    CHECK(joined == a);
}

TEST_CASE("chromatic") {
    auto r = run({"chromatic"}, ">>graph6<<C~\n\n# comment\nDhc\r\n");
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    auto k4 = json::parse(ls[0]);
    CHECK(k4["chi"] == 4);
    CHECK(k4["witness"].size() == 4);
    auto c5 = json::parse(ls[1]);
    CHECK(c5["chi"] == 3);
    CHECK(c5["config"]["subcommand"] == "chromatic");
    std::vector<int> w = c5["witness"];
    for (int i = 0; i < 5; ++i) CHECK(w[i] != w[(i + 1) % 5]);
    for (int c : w) CHECK((c >= 1 && c <= 3));
}

TEST_CASE("clump graph and lift") {
    auto r = run({"clump-graph", kData + "/appendix_a.json"});
    REQUIRE(r.code == 0);
    CHECK(graph_lines(r.out) == std::vector<std::string>{kG21});
    auto l = run({"lift-verify", kData + "/appendix_a.json"});
    REQUIRE(l.code == 0);
    auto rec = json::parse(l.out);
    CHECK(rec["verified"] == true);
    CHECK(rec["exact"] == true);
    CHECK(rec["outcomes"] == 4);
    CHECK(rec["rank"] == 2);
    CHECK(rec["n"] == 21);
    CHECK(rec["edges"] == 72);
}

TEST_CASE("xi-sdp certificates round trip through check-cert") {
    auto path = scratch("xi.cert");
    auto r = run({"xi-sdp", "Dhc", "--cert-out", path.string()});
    REQUIRE(r.code == 0);
    auto rec = json::parse(r.out);
    // between theta-bar and the chromatic number
    CHECK(rec["value"].get<double>() >= std::sqrt(5.0) - 1e-4);
    CHECK(rec["value"].get<double>() <= 3.0 + 1e-4);
    CHECK(rec["certificate"]["k"] == 3);
    CHECK(rec["certificate"]["valid"] == true);
    auto text = slurp(path);
    CHECK(text.find("\"subcommand\":\"xi-sdp\"") != std::string::npos);

    auto c = run({"check-cert", path.string()});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["valid"] == true);
    CHECK(json::parse(c.out)["kind"] == "xi-sdp");

    // tampered bound
    auto pos = text.find("\nbound ");
    REQUIRE(pos != std::string::npos);
    auto end = text.find('\n', pos + 1);
    std::string bad = text.substr(0, pos) + "\nbound 3" + text.substr(end);
    auto t = run({"check-cert", "-"}, bad);
    CHECK(t.code == 0);
    CHECK(json::parse(t.out)["valid"] == false);
    auto g = run({"check-cert", "-"}, "garbage\n");
    CHECK(g.code == 0);
    CHECK(json::parse(g.out)["valid"] == false);

    // an explicit target that cannot be certified
    auto hi = run({"xi-sdp", "Dhc", "--k", "4", "--certify"});
    CHECK(json::parse(hi.out)["certificate"]["valid"] == false);
}

TEST_CASE("hierarchy certificates through check-cert") {
    using namespace qchrome;
    Graph k3 = Graph::complete(3);
    auto r = sync_value_upper_bound(k3, 2, monomial_set(k3, 2, Level::S));
    REQUIRE(r.certificate);
    auto c = run({"check-cert", "-"}, r.certificate->to_json());
    CHECK(json::parse(c.out)["valid"] == true);
    CHECK(json::parse(c.out)["kind"] == "sync-hierarchy-certificate");
    auto bad = *r.certificate;
    bad.z[1][1] += 1;
    CHECK(json::parse(run({"check-cert", "-"}, bad.to_json()).out)["valid"] == false);
}

TEST_CASE("orthrank trees") {
    auto path = scratch("c5.tree");
    auto r = run({"orthrank", "Dhc", "-k", "2", "--cert-out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["success"] == true);
    auto tree = json::parse(slurp(path));
    CHECK(tree["config"]["k"] == 2);
    CHECK(json::parse(run({"check-cert", path.string()}).out)["valid"] == true);

    // a failed search is data, not an error
    auto f = run({"orthrank", "Dhc", "-k", "3"});
    CHECK(f.code == 0);
    CHECK(json::parse(f.out)["success"] == false);
    CHECK(json::parse(run({"check-cert", "-"}, f.out).out)["valid"] == false);

    auto b = run({"orthrank", kG21, "-k", "4", "--budget-nodes", "2"});
    CHECK(b.code == 0);
    CHECK(json::parse(b.out)["budget_exhausted"] == true);
}

TEST_CASE("pipeline") {
    auto dir = scratch("pipeline");
    auto r = run({"pipeline", "--sorted", "--workers", "2", "--cert-out", dir.string()}, "C~\nDhc\nCl\n");
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    auto k4 = json::parse(ls[0]);
    CHECK(k4["status"] == "resolved");
    CHECK(k4["resolved_by"] == "xi-sdp");
    CHECK(k4["chi"] == 4);
    CHECK(k4["config"]["workers"] == 2);
    auto c5 = json::parse(ls[1]);
    CHECK(c5["index"] == 2);
    CHECK(c5["status"] == "resolved");
    auto path = c5["certificate"].get<std::string>();
    CHECK(json::parse(run({"check-cert", path}).out)["valid"] == true);
    auto p4 = json::parse(ls[2]);
    CHECK(p4["status"] == "skipped");
    CHECK(p4["chi"] == 2);
}
