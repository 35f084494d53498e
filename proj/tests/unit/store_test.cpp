#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "rdfcomp/parse.h"
#include "rdfcomp/service.h"
#include "rdfcomp/store.h"
#include "scenario.h"

using namespace rdfcomp;
using namespace rdfcomp::store;
using namespace scenario;
using nlohmann::json;

namespace {

const std::string kFixtures = RDFCOMP_FIXTURES;

std::string tempPath(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rdfcomp-tests";
  std::filesystem::create_directories(dir);
  auto p = dir / (name + "-" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p.string();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

StoreOptions scenarioOptions(const std::string& log = "") {
  StoreOptions o;
  o.graphSource = kFixtures + "/scenario.nt";
  o.statementsFile = kFixtures + "/scenario.stmts";
  o.labelsFile = kFixtures + "/labels.tsv";
  o.statementLog = log;
  return o;
}

Query q0() { return parseQuery(readFile(kFixtures + "/q0.rq")); }

std::string listingText(const StoreState& s) {
  std::string out;
  for (const auto& l : listStatements(s)) {
    out += l.id + " " + l.subject.toString() + " " + l.predicate.toString();
    for (const auto& r : l.records)
      out += " [" + r.provenance.author.value_or("") + "|" +
             r.provenance.reference.value_or("") + "|" +
             formatTimestamp(r.recorded) + "]";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(LoadGraph, ScenarioFile) {
  auto s = loadGraph(kFixtures + "/scenario.nt");
  EXPECT_EQ(s.graph->size(), 3u);
  EXPECT_EQ(s.version, 1u);
  EXPECT_TRUE(s.statements->empty());
}

TEST(LoadGraph, EmptyFile) {
  auto path = tempPath("empty.nt");
  writeFile(path, "");
  EXPECT_TRUE(loadGraph(path).graph->empty());
}

TEST(LoadGraph, MalformedAborts) {
  auto path = tempPath("bad.nt");
  writeFile(path, "<a> <b> <c> .\n<a> <b> .\n");
  EXPECT_THROW(loadGraph(path), ParseError);
}

TEST(LoadGraph, NonSPStatementsRejected) {
  auto path = tempPath("general.stmts");
  writeFile(path, "COMPLETE { ?s <p> ?o }\n");
  EXPECT_THROW(loadGraph(kFixtures + "/scenario.nt", path), FragmentViolation);
}

TEST(LoadGraph, RemoteSource) {
  httplib::Server srv;
  srv.Get("/graph.nt", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(readFile(kFixtures + "/scenario.nt"), "application/n-triples");
  });
  srv.Get("/down", [](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
  });
  int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  EXPECT_EQ(loadGraph(base + "/graph.nt").graph->size(), 3u);
  EXPECT_THROW(loadGraph(base + "/down"), RetryableError);
  srv.stop();
  t.join();
  EXPECT_THROW(loadGraph(base + "/graph.nt"), RetryableError);
}

TEST(StoreOps, AddMarksPredicateComplete) {
  auto s = loadGraph(kFixtures + "/scenario.nt");
  EXPECT_TRUE(entityView(s, I("a99")).completeness.empty());
  auto next = addStatement(s, I("a99"), I("crew"), {});
  EXPECT_EQ(next.version, s.version + 1);
  auto view = entityView(next, I("a99"));
  ASSERT_EQ(view.completeness.count(I("crew")), 1u);
  EXPECT_TRUE(view.completeness.at(I("crew")).complete);
  // the old snapshot is untouched
  EXPECT_TRUE(entityView(s, I("a99")).completeness.empty());
}

TEST(StoreOps, AddTwiceKeepsOneEntryTwoRecords) {
  auto s = loadGraph(kFixtures + "/scenario.nt");
  Provenance a;
  a.author = "alice";
  Provenance b;
  b.author = "bob";
  s = addStatement(s, I("a99"), I("crew"), {a, {}});
  s = addStatement(s, I("a99"), I("crew"), {b, {}});
  EXPECT_EQ(s.index->size(), 1u);
  EXPECT_EQ(s.statements->size(), 1u);
  auto listing = listStatements(s);
  ASSERT_EQ(listing.size(), 1u);
  EXPECT_EQ(listing[0].records.size(), 2u);
}

TEST(StoreOps, RemoveRoundTrip) {
  auto s = loadGraph(kFixtures + "/scenario.nt");
  auto added = addStatement(s, I("a99"), I("crew"), {});
  auto removed = removeStatement(added, I("a99"), I("crew"));
  EXPECT_FALSE(removed.index->contains(I("a99"), I("crew")));
  EXPECT_TRUE(listStatements(removed).empty());
  EXPECT_THROW(removeStatement(removed, I("a99"), I("crew")), NotFound);
  EXPECT_THROW(removeStatement(StoreState{}, I("a99"), I("crew")), NotFound);
}

TEST(StoreOps, RemovingTedStatementFlipsVerdict) {
  auto s = loadGraph(kFixtures + "/scenario.nt", kFixtures + "/scenario.stmts");
  auto before = queryWithCompleteness(s, q0());
  ASSERT_FALSE(before.undecided());
  EXPECT_TRUE(before.verdict->complete);
  EXPECT_EQ(before.answers.size(), 1u);
  auto after = queryWithCompleteness(removeStatement(s, I("ted"), I("child")), q0());
  EXPECT_FALSE(after.verdict->complete);
  EXPECT_EQ(after.answers.size(), 1u);
}

TEST(StoreOps, NoValueQuery) {
  auto s = loadGraph(kFixtures + "/scenario.nt", kFixtures + "/scenario.stmts");
  auto r = queryWithCompleteness(s, parseQuery(readFile(kFixtures + "/ted_children.rq")));
  EXPECT_TRUE(r.answers.empty());
  EXPECT_TRUE(r.verdict->complete);
}

TEST(StoreOps, BudgetGivesUndecided) {
  auto s = loadGraph(kFixtures + "/scenario.nt", kFixtures + "/scenario.stmts");
  EntailmentConfig cfg;
  cfg.maxSteps = 1;
  cfg.completenessSkip = false;
  auto r = queryWithCompleteness(s, q0(), cfg);
  EXPECT_TRUE(r.undecided());
  EXPECT_EQ(r.answers.size(), 1u);
}

TEST(StoreOps, CoherentWithEngine) {
  auto s = loadGraph(kFixtures + "/scenario.nt", kFixtures + "/scenario.stmts");
  std::vector<std::pair<Term, Term>> keys = {
      {I("ted"), I("child")}, {I("a99"), I("crew")}, {I("tony"), I("child")}};
  for (const auto& [subj, pred] : keys) {
    for (IndexMode mode : {IndexMode::Generic, IndexMode::SPIndexed}) {
      EntailmentConfig cfg;
      cfg.indexMode = mode;
      EXPECT_EQ(queryWithCompleteness(s, q0(), cfg).verdict->complete,
                entails(q0().body, *s.statements, *s.graph, cfg).complete);
    }
    s = removeStatement(s, subj, pred);
  }
}

TEST(StoreOps, EntityViews) {
  auto s = loadGraph(kFixtures + "/scenario.nt", kFixtures + "/scenario.stmts");
  auto a99 = entityView(s, I("a99"));
  ASSERT_EQ(a99.facts.size(), 1u);
  EXPECT_EQ(a99.facts[0].first, I("crew"));
  EXPECT_EQ(a99.facts[0].second.size(), 2u);
  EXPECT_TRUE(a99.completeness.at(I("crew")).complete);

  auto toby = entityView(s, I("toby"));
  EXPECT_TRUE(toby.facts.empty());
  EXPECT_TRUE(toby.completeness.empty());

  auto ted = entityView(s, I("ted"));
  EXPECT_TRUE(ted.facts.empty());
  ASSERT_EQ(ted.completeness.size(), 1u);
  EXPECT_TRUE(ted.completeness.at(I("child")).complete);

  // flags are exactly the index keys with that subject
  for (Term e : {I("a99"), I("tony"), I("ted"), I("toby")}) {
    std::size_t keys = 0;
    for (const auto& k : s.index->keys()) keys += k.subject == e;
    EXPECT_EQ(entityView(s, e).completeness.size(), keys);
  }
}

TEST(StoreOps, ListStatements) {
  auto s = loadGraph(kFixtures + "/scenario.nt", kFixtures + "/scenario.stmts");
  auto all = listStatements(s);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].subject, I("a99"));
  EXPECT_EQ(all[1].subject, I("ted"));
  EXPECT_EQ(all[2].subject, I("tony"));
  EXPECT_EQ(listStatements(s, I("child")).size(), 2u);
  EXPECT_TRUE(listStatements(s, I("unknown")).empty());
}

TEST(StoreOps, Search) {
  Store store(scenarioOptions());
  auto s = store.snapshot();
  auto hits = search(*s, "apo");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].iri, I("a99"));
  EXPECT_TRUE(search(*s, "").empty());
  EXPECT_TRUE(search(*s, "zzz").empty());
  EXPECT_EQ(search(*s, "TONY").size(), 1u);
}

TEST(Persistence, RestartReproducesState) {
  auto log = tempPath("statements.log");
  std::string listing;
  bool verdict = false;
  {
    Store store(scenarioOptions(log));
    Provenance p;
    p.author = "ann";
    p.reference = "http://src/1";
    store.addStatement(I("tony"), I("likes"), p);
    store.addStatement(I("a99"), I("crew"), p);
    store.removeStatement(I("ted"), I("child"));
    store.addStatement(I("toby"), I("child"), {});
    store.removeStatement(I("toby"), I("child"));
    listing = listingText(*store.snapshot());
    verdict = queryWithCompleteness(*store.snapshot(), q0()).verdict->complete;
    EXPECT_FALSE(verdict);
  }
  // the removal of a statements-file key must survive compaction
  for (int restart = 0; restart < 2; ++restart) {
    Store again(scenarioOptions(log));
    EXPECT_EQ(listingText(*again.snapshot()), listing);
    EXPECT_EQ(queryWithCompleteness(*again.snapshot(), q0()).verdict->complete,
              verdict);
  }
}

TEST(Persistence, TombstoneKeptUntilCompaction) {
  auto log = tempPath("tombstone.log");
  {
    StoreOptions o;
    o.graphSource = kFixtures + "/scenario.nt";
    o.statementLog = log;
    Store store(o);
    store.addStatement(I("a99"), I("crew"));
    store.removeStatement(I("a99"), I("crew"));
    EXPECT_NE(readFile(log).find("\"remove\""), std::string::npos);
  }
  StoreOptions o;
  o.graphSource = kFixtures + "/scenario.nt";
  o.statementLog = log;
  Store reopened(o);
  EXPECT_TRUE(listStatements(*reopened.snapshot()).empty());
  EXPECT_TRUE(readFile(log).empty());
}

TEST(Persistence, WriteFailureLeavesStateUnchanged) {
  auto dir = tempPath("logdir");
  std::filesystem::create_directories(dir);
  StoreOptions o;
  o.graphSource = kFixtures + "/scenario.nt";
  o.statementLog = dir + "/log";
  Store store(o);
  auto before = store.snapshot()->version;
  std::filesystem::remove_all(dir);
  EXPECT_THROW(store.addStatement(I("a99"), I("crew")), Error);
  EXPECT_EQ(store.snapshot()->version, before);
  EXPECT_TRUE(listStatements(*store.snapshot()).empty());
}

TEST(Concurrency, ReadersSeeWholeVersions) {
  Store store(scenarioOptions());
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      auto s = store.snapshot();
      bool indexed = s->index->contains(I("a99"), I("likes"));
      bool listed = s->provenance.count(SPKey{I("a99"), I("likes")}) == 1;
      if (indexed != listed) ++bad;
    }
  });
  for (int i = 0; i < 200; ++i) {
    store.addStatement(I("a99"), I("likes"));
    store.removeStatement(I("a99"), I("likes"));
  }
  done = true;
  reader.join();
  EXPECT_EQ(bad.load(), 0);
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    store_ = std::make_unique<Store>(scenarioOptions());
    service_ = std::make_unique<service::HttpService>(*store_);
    port_ = service_->bindToAnyPort("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { service_->listenAfterBind(); });
    service_->waitUntilReady();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    service_->stop();
    thread_.join();
  }

  json query(const std::string& text, json config = nullptr) {
    json body = {{"query", text}};
    if (!config.is_null()) body["config"] = config;
    auto res = client_->Post("/api/v1/query", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 200) << res->body;
    return json::parse(res->body);
  }

  std::unique_ptr<Store> store_;
  std::unique_ptr<service::HttpService> service_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServiceTest, HealthAndVersion) {
  auto h = client_->Get("/api/v1/health");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->status, 200);
  auto v = client_->Get("/api/v1/version");
  ASSERT_TRUE(v);
  auto j = json::parse(v->body);
  EXPECT_EQ(j["triples"], 3);
  EXPECT_EQ(j["statements"], 3);
}

TEST_F(ServiceTest, EntityPage) {
  auto res = client_->Get("/api/v1/entity/" +
                          httplib::detail::encode_url(kNs + "a99"));
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  auto j = json::parse(res->body);
  EXPECT_EQ(j["label"], "Apollo 99");
  EXPECT_EQ(j["facts"][0]["predicate"], kNs + "crew");
  EXPECT_EQ(j["facts"][0]["values"].size(), 2u);
  EXPECT_TRUE(j["completeness"][kNs + "crew"]["complete"].get<bool>());

  auto byParam = client_->Get("/api/v1/entity?iri=" +
                              httplib::detail::encode_url(kNs + "ted"));
  ASSERT_TRUE(byParam);
  auto t = json::parse(byParam->body);
  EXPECT_TRUE(t["facts"].empty());
  EXPECT_TRUE(t["completeness"][kNs + "child"]["complete"].get<bool>());
}

TEST_F(ServiceTest, QueryFlowAndStatementCrud) {
  const std::string q0Text = readFile(kFixtures + "/q0.rq");
  auto first = query(q0Text);
  EXPECT_TRUE(first["complete"].get<bool>());
  EXPECT_FALSE(first["undecided"].get<bool>());
  ASSERT_EQ(first["answers"].size(), 1u);
  EXPECT_EQ(first["answers"][0]["child"]["value"], kNs + "toby");

  auto del = client_->Delete("/api/v1/statement?subject=" +
                             httplib::detail::encode_url(kNs + "ted") +
                             "&predicate=" +
                             httplib::detail::encode_url(kNs + "child"));
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 204);
  auto again = client_->Delete("/api/v1/statement?subject=" +
                               httplib::detail::encode_url(kNs + "ted") +
                               "&predicate=" +
                               httplib::detail::encode_url(kNs + "child"));
  EXPECT_EQ(again->status, 404);

  auto second = query(q0Text);
  EXPECT_FALSE(second["complete"].get<bool>());
  EXPECT_EQ(second["witness"]["instantiation"]["crew"]["value"], kNs + "ted");

  json put = {{"subject", kNs + "ted"}, {"predicate", kNs + "child"},
              {"author", "ann"}, {"reference", "http://src/1"}};
  auto added = client_->Put("/api/v1/statement", put.dump(), "application/json");
  ASSERT_TRUE(added);
  EXPECT_EQ(added->status, 201);
  EXPECT_EQ(json::parse(added->body)["id"], statementId(I("ted"), I("child")));
  EXPECT_TRUE(query(q0Text)["complete"].get<bool>());

  auto list = client_->Get("/api/v1/statements?predicate=" +
                           httplib::detail::encode_url(kNs + "child"));
  auto listed = json::parse(list->body);
  ASSERT_EQ(listed.size(), 2u);
  EXPECT_EQ(listed[0]["subject"], kNs + "ted");
  EXPECT_EQ(listed[0]["provenance"][0]["author"], "ann");
}

TEST_F(ServiceTest, NoValueQuery) {
  auto r = query(readFile(kFixtures + "/ted_children.rq"));
  EXPECT_TRUE(r["answers"].empty());
  EXPECT_TRUE(r["complete"].get<bool>());
}

TEST_F(ServiceTest, UndecidedAndGenericMode) {
  auto r = query(readFile(kFixtures + "/q0.rq"),
                 {{"maxSteps", 1}, {"completenessSkip", false}});
  EXPECT_TRUE(r["undecided"].get<bool>());
  EXPECT_TRUE(r["complete"].is_null());
  auto g = query(readFile(kFixtures + "/q0.rq"), {{"index", "generic"}});
  EXPECT_EQ(g["stats"]["index"], "generic");
  EXPECT_TRUE(g["complete"].get<bool>());
}

TEST_F(ServiceTest, BadRequests) {
  auto bad = client_->Post("/api/v1/query", "{\"query\": \"SELECT ?x WHERE { }\"}",
                           "application/json");
  EXPECT_EQ(bad->status, 400);
  EXPECT_NE(json::parse(bad->body)["error"].get<std::string>().find("line 1"),
            std::string::npos);
  auto notJson = client_->Put("/api/v1/statement", "nope", "application/json");
  EXPECT_EQ(notJson->status, 400);
  auto missing = client_->Put("/api/v1/statement", "{\"subject\": \"x\"}",
                              "application/json");
  EXPECT_EQ(missing->status, 400);
}

TEST_F(ServiceTest, SearchEndpoint) {
  auto res = client_->Get("/api/v1/search?q=apo");
  auto j = json::parse(res->body);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["iri"], kNs + "a99");
  EXPECT_EQ(j[0]["label"], "Apollo 99");
}

TEST(BindAddress, Parsing) {
  EXPECT_EQ(service::parseBindAddress("127.0.0.1:8080"),
            std::make_pair(std::string("127.0.0.1"), 8080));
  EXPECT_EQ(service::parseBindAddress(":9000").first, "0.0.0.0");
  EXPECT_EQ(service::parseBindAddress("9000").second, 9000);
  EXPECT_THROW(service::parseBindAddress("host:xx"), Error);
}
