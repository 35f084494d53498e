#include "rdfcomp/service.h"

#include <httplib.h>

#include "json_codec.h"
#include "rdfcomp/parse.h"

namespace rdfcomp::service {

using detail::json;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, {{"error", message}});
}

json listingToJson(const store::StatementListing& l) {
  json records = json::array();
  for (const auto& r : l.records) records.push_back(detail::recordToJson(r));
  return {{"id", l.id},
          {"subject", std::string(l.subject.lexical())},
          {"predicate", std::string(l.predicate.lexical())},
          {"provenance", records}};
}

json entityToJson(const store::StoreState& s, const store::EntityView& v) {
  json facts = json::array();
  for (const auto& [p, objects] : v.facts) {
    json values = json::array();
    for (Term o : objects) values.push_back(detail::termToJson(o));
    facts.push_back({{"predicate", std::string(p.lexical())}, {"values", values}});
  }
  json completeness = json::object();
  for (const auto& [p, c] : v.completeness) {
    json records = json::array();
    for (const auto& r : c.records) records.push_back(detail::recordToJson(r));
    completeness[std::string(p.lexical())] = {{"complete", c.complete},
                                              {"provenance", records}};
  }
  json out = {{"entity", std::string(v.entity.lexical())},
              {"facts", facts},
              {"completeness", completeness},
              {"version", s.version}};
  if (auto it = s.labels->find(v.entity); it != s.labels->end())
    out["label"] = it->second;
  return out;
}

EntailmentConfig configFromJson(const json& j, const ServiceConfig& defaults) {
  EntailmentConfig cfg;
  cfg.indexMode = IndexMode::SPIndexed;
  cfg.timeout = defaults.entailmentTimeout;
  cfg.maxSteps = defaults.maxSteps;
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw Error("'config' must be an object");
  cfg.earlyFailure = j.value("earlyFailure", cfg.earlyFailure);
  cfg.completenessSkip = j.value("completenessSkip", cfg.completenessSkip);
  cfg.maxSteps = j.value("maxSteps", cfg.maxSteps);
  if (cfg.maxSteps == 0) throw Error("maxSteps must be at least 1");
  if (j.contains("timeoutMs"))
    cfg.timeout = std::chrono::milliseconds(j.at("timeoutMs").get<long>());
  if (j.contains("index")) {
    auto mode = j.at("index").get<std::string>();
    if (mode == "generic") cfg.indexMode = IndexMode::Generic;
    else if (mode != "sp") throw Error("index must be 'sp' or 'generic'");
  }
  return cfg;
}

json queryToJson(const store::QueryResult& r, std::uint64_t version) {
  json vars = json::array();
  for (Term v : r.variables) vars.push_back(std::string(v.lexical()));
  json answers = json::array();
  for (const auto& m : r.answers) answers.push_back(detail::mappingToJson(m));
  json out = {{"variables", vars},
              {"answers", answers},
              {"undecided", r.undecided()},
              {"version", version}};
  if (r.undecided()) {
    out["complete"] = nullptr;
    out["reason"] = r.undecidedReason;
    return out;
  }
  const auto& v = *r.verdict;
  out["complete"] = v.complete;
  if (v.witness) {
    json missing = json::array();
    for (const auto& tp : v.witness->missing) missing.push_back(tp.toString());
    out["witness"] = {{"instantiation", detail::mappingToJson(v.witness->instantiation)},
                      {"missing", missing}};
  }
  out["stats"] = {{"steps", v.stats.steps},
                  {"epgCalls", v.stats.epgCalls},
                  {"transferCalls", v.stats.transferCalls},
                  {"elapsedUs", v.stats.elapsed.count()},
                  {"index", std::string(toString(v.indexMode))}};
  return out;
}

Term iriParam(const std::string& value, const char* name) {
  if (value.empty()) throw Error(std::string("missing '") + name + "'");
  return Term::iri(value);
}

}  // namespace

HttpService::HttpService(store::Store& store, ServiceConfig config)
    : store_(store), config_(config), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpService::~HttpService() = default;

void HttpService::routes() {
  auto& srv = *server_;
  const std::string base = "/api/v1";

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const NotFound& e) {
      fail(res, 404, e.what());
    } catch (const json::exception& e) {
      fail(res, 400, std::string("bad request body: ") + e.what());
    } catch (const Error& e) {
      fail(res, 400, e.what());
    } catch (const std::exception& e) {
      fail(res, 500, e.what());
    }
  });

  srv.Get(base + "/health", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}});
  });

  srv.Get(base + "/version", [this](const httplib::Request&, httplib::Response& res) {
    auto s = store_.snapshot();
    reply(res, 200, {{"service", "rdfcomp"},
                     {"api", "v1"},
                     {"version", s->version},
                     {"triples", s->graph->size()},
                     {"statements", s->statements->size()}});
  });

  auto entity = [this](const std::string& iri, httplib::Response& res) {
    auto s = store_.snapshot();
    reply(res, 200, entityToJson(*s, store::entityView(*s, iriParam(iri, "iri"))));
  };
  srv.Get(base + "/entity", [entity](const httplib::Request& req,
                                     httplib::Response& res) {
    entity(req.get_param_value("iri"), res);
  });
  srv.Get(base + R"(/entity/(.+))", [entity](const httplib::Request& req,
                                             httplib::Response& res) {
    entity(httplib::detail::decode_url(req.matches[1], false), res);
  });

  srv.Put(base + "/statement", [this](const httplib::Request& req,
                                      httplib::Response& res) {
    json body = json::parse(req.body);
    if (!body.is_object()) throw Error("request body must be a JSON object");
    Term s = iriParam(body.value("subject", ""), "subject");
    Term p = iriParam(body.value("predicate", ""), "predicate");
    Provenance prov = detail::provenanceFromJson(body);
    std::string id = store_.addStatement(s, p, prov);
    reply(res, 201, {{"id", id}, {"version", store_.snapshot()->version}});
  });

  srv.Delete(base + "/statement", [this](const httplib::Request& req,
                                         httplib::Response& res) {
    store_.removeStatement(iriParam(req.get_param_value("subject"), "subject"),
                           iriParam(req.get_param_value("predicate"), "predicate"));
    res.status = 204;
  });

  srv.Get(base + "/statements", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    auto s = store_.snapshot();
    std::optional<Term> filter;
    if (req.has_param("predicate"))
      filter = iriParam(req.get_param_value("predicate"), "predicate");
    json out = json::array();
    for (const auto& l : store::listStatements(*s, filter))
      out.push_back(listingToJson(l));
    reply(res, 200, out);
  });

  srv.Post(base + "/query", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    json body = json::parse(req.body);
    if (!body.is_object() || !body.contains("query"))
      throw Error("expected {\"query\": \"SELECT ...\"}");
    Query q = parseQuery(body.at("query").get<std::string>());
    EntailmentConfig cfg =
        configFromJson(body.value("config", json(nullptr)), config_);
    auto s = store_.snapshot();
    reply(res, 200, queryToJson(store::queryWithCompleteness(*s, q, cfg), s->version));
  });

  srv.Get(base + "/search", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    auto s = store_.snapshot();
    std::size_t limit = 20;
    if (req.has_param("limit")) limit = std::stoul(req.get_param_value("limit"));
    json out = json::array();
    for (const auto& hit : store::search(*s, req.get_param_value("q"), limit)) {
      json h = {{"iri", std::string(hit.iri.lexical())}};
      if (!hit.label.empty()) h["label"] = hit.label;
      out.push_back(h);
    }
    reply(res, 200, out);
  });
}

bool HttpService::listen(const std::string& host, int port) {
  return server_->listen(host, port);
}

int HttpService::bindToAnyPort(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool HttpService::listenAfterBind() { return server_->listen_after_bind(); }

void HttpService::waitUntilReady() const { server_->wait_until_ready(); }

void HttpService::stop() { server_->stop(); }

std::pair<std::string, int> parseBindAddress(const std::string& text) {
  auto colon = text.rfind(':');
  std::string host = colon == std::string::npos ? "" : text.substr(0, colon);
  std::string port = colon == std::string::npos ? text : text.substr(colon + 1);
  if (host.empty()) host = "0.0.0.0";
  try {
    std::size_t used = 0;
    int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range(port);
    return {host, p};
  } catch (const std::exception&) {
    throw Error("invalid bind address '" + text + "'");
  }
}

}  // namespace rdfcomp::service
