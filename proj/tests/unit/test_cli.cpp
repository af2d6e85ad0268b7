#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "qgroth/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qgroth::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(QGROTH_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("invert prints the projective expansion") {
  const Result r = run({"invert", "--algebra", "trunc_poly_2", "--precision", "8"});
  CHECK(r.code == 0);
  CHECK(r.out == "[L] = (1 - q^2 + q^4 - q^6 + O(q^8)) [P]\n");
}

TEST_CASE("qbinom") {
  const Result r = run({"qbinom", "4", "2", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 + q^2 + 2q^4 + q^6 + q^8\n");
}

TEST_CASE("sl2 balanced relations") {
  const Result r = run({"sl2", "--n", "3", "--convention", "balanced"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "PASS K Kinv = 1\nPASS KE = q^2 EK\nPASS KF = q^-2 FK\nPASS EF - FE = (K - Kinv)/(q - q^-1)\n");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == qgroth::cli::kExitUsage);
  CHECK(run({"bogus"}).code == qgroth::cli::kExitUsage);
  CHECK(run({"qbinom", "4", "5"}).code == qgroth::cli::kExitDomainError);
  CHECK(run({"cartan", "--algebra", "nope"}).code == qgroth::cli::kExitUsage);
  CHECK(run({"invert", "--algebra", "dual_numbers", "--precision", "0"}).code == qgroth::cli::kExitUsage);
  CHECK(run({"class", "--workspace", fixture("dual_numbers.json"), "--algebra", "dual_numbers", "--module",
             "missing"})
            .code == qgroth::cli::kExitUsage);
}

TEST_CASE("json errors") {
  const Result r = run({"cartan", "--algebra", "nope", "--format", "json"});
  CHECK(r.code == qgroth::cli::kExitUsage);
  const auto doc = nlohmann::ordered_json::parse(r.out);
  CHECK(doc.begin().key() == "command");
  CHECK(doc["command"] == "cartan");
  CHECK(doc["error"]["kind"] == "DanglingReference");
  CHECK(doc["error"]["message"].get<std::string>().find("nope") != std::string::npos);
}

TEST_CASE("json output is deterministic") {
  const std::vector<std::string> args{"resolve", "--algebra", "three_cycle", "--module", "L_e1", "--weight-floor",
                                      "-6", "--differentials", "--format", "json"};
  const Result a = run(args);
  const Result b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["command"] == "resolve");
  CHECK(!doc["resolution"]["terms"].empty());
}

TEST_CASE("default precision from the environment") {
  ::setenv("QGROTH_PRECISION", "4", 1);
  const Result r = run({"invert", "--algebra", "dual_numbers", "--format", "json"});
  ::unsetenv("QGROTH_PRECISION");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["precision"] == 4);
  CHECK(doc["classes"][0]["class"]["coords"][0]["series"]["text"] == "1 - q^2 + O(q^4)");
}

TEST_CASE("module references") {
  CHECK(run({"class", "--algebra", "dual_numbers", "--module", "L<2>"}).out == "[L]: q^2\n");
  CHECK(run({"class", "--algebra", "dual_numbers", "--module", "P"}).out == "[L]: 1 + q^2\n");
  const Result h = run({"class", "--workspace", fixture("dual_numbers.json"), "--algebra", "dual_numbers",
                        "--module", "H"});
  CHECK(h.code == 0);
  CHECK(h.out == "[L]: 1 + q^2\n");
}

TEST_CASE("euler of a workspace complex") {
  const Result r = run({"euler", "--workspace", fixture("a2_quiver.json"), "--complex", "cancelling_pair",
                        "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["agree"] == true);
  CHECK(doc["cohomology_sum"] == doc["resolution_sum"]);
}
