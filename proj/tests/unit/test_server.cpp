#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "gazekit/error.hpp"
#include "gazekit/server.hpp"

using namespace gazekit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Running {
  fs::path dir;
  std::unique_ptr<Server> server;
  int port = 0;
  std::thread thread;

  Running() {
    dir = fs::temp_directory_path() / ("gazekit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    ServerOptions o;
    o.port = 0;
    o.data_dir = dir.string();
    server = std::make_unique<Server>(o);
    port = server->bind();
    thread = std::thread([this] { server->run(); });
    server->wait_until_ready();
  }
  ~Running() {
    server->stop();
    thread.join();
    fs::remove_all(dir);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(30, 0);
    return c;
  }
};

json body(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

const char* kGaze =
    "t\tx\ty\n"
    "0\t10\t10\n40\t10\t10\n80\t10\t10\n120\t10\t10\n"
    "140\t500\t500\n"
    "160\t110\t10\n200\t110\t10\n240\t110\t10\n280\t110\t10\n"
    "300\t900\t900\n"
    "320\t12\t12\n360\t12\t12\n400\t12\t12\n440\t12\t12\n";

const char* kAois = R"([{"id":"A","shape":{"type":"rect","x":0,"y":0,"w":50,"h":50},"precedence":0,"gid":1},
                        {"id":"B","shape":{"type":"rect","x":100,"y":0,"w":50,"h":50},"precedence":1,"gid":1}])";

std::string new_session(httplib::Client& c) {
  auto j = body(c.Post("/api/sessions"));
  return j["session_id"];
}

void load(httplib::Client& c, const std::string& id, const std::string& sample = "P1") {
  auto r = c.Post(("/api/sessions/" + id + "/samples?sample_id=" + sample).c_str(), kGaze, "text/tab-separated-values");
  REQUIRE(r);
  REQUIRE(r->status == 200);
  r = c.Put(("/api/sessions/" + id + "/aois").c_str(), kAois, "application/json");
  REQUIRE(r->status == 200);
}

}  // namespace

TEST_CASE("health and lifecycle") {
  Running srv;
  auto c = srv.client();
  auto h = body(c.Get("/api/health"));
  CHECK(h["status"] == "ok");
  CHECK(h.contains("version"));

  const auto id = new_session(c);
  auto summary = body(c.Get(("/api/sessions/" + id).c_str()));
  CHECK(summary["session_id"] == id);
  CHECK(summary["version"] == 0);
  CHECK(summary["samples"].empty());
  CHECK(body(c.Get("/api/sessions"))["sessions"] == json::array({id}));

  load(c, id);
  summary = body(c.Get(("/api/sessions/" + id).c_str()));
  CHECK(summary["version"] == 2);
  CHECK(summary["samples"][0]["id"] == "P1");

  auto fx = body(c.Get(("/api/sessions/" + id + "/fixations").c_str()));
  REQUIRE(fx["samples"][0]["fixations"].size() == 3);
  auto labels = body(c.Get(("/api/sessions/" + id + "/labels").c_str()));
  CHECK(labels["samples"][0]["haar"] == 1.0);
  CHECK(labels["samples"][0]["visits"].size() == 3);
  auto m = body(c.Get(("/api/sessions/" + id + "/matrix?rows=aoi&cols=aoi&metric=transitions_direct").c_str()));
  CHECK(m["values"] == json::array({json::array({0, 1}), json::array({1, 0})}));
  auto fc = body(c.Get(("/api/sessions/" + id + "/focus-context?aoi=A").c_str()));
  CHECK(fc["samples"][0]["fixations"][1]["class"] == "glancing_out");
  auto tl = body(c.Get(("/api/sessions/" + id + "/timeline").c_str()));
  CHECK(tl["samples"][0]["segments"].size() == 3);
  auto d = body(c.Get(("/api/sessions/" + id + "/density?bandwidth=10&grid_width=16").c_str()));
  CHECK(d["width"] == 16);
  auto b = body(c.Get(("/api/sessions/" + id + "/bundles?iterations=2").c_str()));
  CHECK(b["lines"].size() == 2);
  auto metrics = c.Get(("/api/sessions/" + id + "/metrics?format=tsv").c_str());
  REQUIRE(metrics);
  CHECK(metrics->body.rfind("scope\tentity\tmetric_id\tvalue\tunit\tsupport\n", 0) == 0);

  auto edit = body(c.Put(("/api/sessions/" + id + "/aois/A").c_str(),
                         R"({"shape":{"type":"rect","x":0,"y":0,"w":5,"h":5}})", "application/json"));
  CHECK(edit["version"] == 3);
  labels = body(c.Get(("/api/sessions/" + id + "/labels").c_str()));
  CHECK(labels["samples"][0]["haar"] == doctest::Approx(1.0 / 3.0));

  auto scoped = body(c.Put(("/api/sessions/" + id + "/params").c_str(), R"({"detection":{"min_duration":200}})",
                           "application/json"));
  CHECK(scoped["version"] == 4);
  CHECK(body(c.Get(("/api/sessions/" + id + "/fixations").c_str()))["samples"][0]["fixations"].empty());
}

TEST_CASE("export, import and save") {
  Running srv;
  auto c = srv.client();
  const auto a = new_session(c);
  load(c, a);
  auto zip = c.Get(("/api/sessions/" + a + "/export").c_str());
  REQUIRE(zip);
  CHECK(zip->get_header_value("Content-Type") == "application/zip");
  const auto b = new_session(c);
  auto imported = body(c.Post(("/api/sessions/" + b + "/import").c_str(), zip->body, "application/zip"));
  CHECK(imported["version"] == 2);
  auto again = c.Get(("/api/sessions/" + b + "/export").c_str());
  REQUIRE(again);
  CHECK(again->body == zip->body);
  auto saved = body(c.Post(("/api/sessions/" + a + "/save").c_str()));
  CHECK(fs::exists(saved["path"].get<std::string>()));
}

TEST_CASE("sessions do not share state") {
  Running srv;
  auto c = srv.client();
  const auto a = new_session(c), b = new_session(c);
  CHECK(a != b);
  load(c, a, "PA");
  load(c, b, "PB");
  c.Put(("/api/sessions/" + b + "/aois/A").c_str(), R"({"shape":{"type":"rect","x":0,"y":0,"w":1,"h":1}})",
        "application/json");
  auto la = body(c.Get(("/api/sessions/" + a + "/labels").c_str()));
  auto lb = body(c.Get(("/api/sessions/" + b + "/labels").c_str()));
  CHECK(la["samples"][0]["id"] == "PA");
  CHECK(lb["samples"][0]["id"] == "PB");
  CHECK(la["samples"][0]["haar"] == 1.0);
  CHECK(lb["samples"][0]["haar"] == doctest::Approx(1.0 / 3.0));
  CHECK(la["version"] == 2);
  CHECK(lb["version"] == 3);
}

TEST_CASE("errors map to statuses") {
  Running srv;
  auto c = srv.client();
  auto r = c.Get("/api/sessions/nope");
  REQUIRE(r);
  CHECK(r->status == 404);
  CHECK(json::parse(r->body)["error"] == "UnknownId");
  const auto id = new_session(c);
  load(c, id);
  r = c.Get(("/api/sessions/" + id + "/matrix?rows=aoi&cols=twi&metric=nw").c_str());
  CHECK(r->status == 400);
  CHECK(json::parse(r->body)["error"] == "UnsupportedCombination");
  r = c.Put(("/api/sessions/" + id + "/scope").c_str(), R"("samples=id:ghost")", "application/json");
  CHECK(r->status == 404);
  r = c.Put(("/api/sessions/" + id + "/aois").c_str(), "[{", "application/json");
  CHECK(r->status == 400);
  CHECK(json::parse(r->body)["error"] == "MalformedJson");
  r = c.Post(("/api/sessions/" + id + "/samples?sample_id=bad").c_str(), "0\t1\t2\n0\t1\t2\n", "text/plain");
  CHECK(json::parse(r->body)["error"] == "NonMonotoneTime");
  r = c.Put(("/api/sessions/" + id + "/aois/A").c_str(), R"({"shape":{"type":"polygon","vertices":[[0,0],[1,1]]}})",
            "application/json");
  CHECK(json::parse(r->body)["error"] == "DegenerateShape");
  CHECK(body(c.Get(("/api/sessions/" + id).c_str()))["version"] == 2);  // failed edits do not bump
}

TEST_CASE("replayed reads are byte-identical") {
  Running srv;
  auto c = srv.client();
  const auto id = new_session(c);
  load(c, id);
  for (const char* q : {"/fixations", "/labels", "/matrix?rows=sample&cols=sample&metric=nw&reorder=global",
                        "/density?bandwidth=12", "/bundles", "/timeline", "/metrics", ""}) {
    const auto path = "/api/sessions/" + id + q;
    auto first = c.Get(path.c_str());
    auto second = c.Get(path.c_str());
    REQUIRE(first);
    REQUIRE(second);
    CHECK(first->status == 200);
    CHECK(first->body == second->body);
  }
}

TEST_CASE("port in use and unwritable data dir") {
  Running srv;
  ServerOptions o;
  o.port = srv.port;
  o.data_dir = srv.dir.string();
  Server second(o);
  try {
    second.bind();
    FAIL("bound twice");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PortInUse);
  }

  const auto blocker = srv.dir / "plain-file";
  std::ofstream(blocker) << "x";
  ServerOptions bad;
  bad.data_dir = (blocker / "sub").string();
  try {
    Server s(bad);
    FAIL("accepted an unusable data dir");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DataDirUnwritable);
  }
}

TEST_CASE("environment defaults") {
  ::setenv("GAZEKIT_PORT", "9123", 1);
  ::setenv("GAZEKIT_DATA_DIR", "/tmp/gk-env", 1);
  auto o = server_options_from_env();
  CHECK(o.port == 9123);
  CHECK(o.data_dir == "/tmp/gk-env");
  ::unsetenv("GAZEKIT_PORT");
  ::unsetenv("GAZEKIT_DATA_DIR");
  CHECK(server_options_from_env().port == 8080);
}
