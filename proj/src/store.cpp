#include "rdfcomp/store.h"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json_codec.h"
#include "rdfcomp/eval.h"
#include "rdfcomp/parse.h"

namespace rdfcomp::store {

using detail::json;

namespace {

Timestamp now() {
  return std::chrono::floor<std::chrono::seconds>(
      std::chrono::system_clock::now());
}

std::string fetchRemote(const std::string& url) {
  // http://host[:port]/path
  auto rest = url.substr(std::string("http://").size());
  auto slash = rest.find('/');
  std::string hostPort = "http://" + rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  httplib::Client client(hostPort);
  client.set_connection_timeout(5);
  client.set_read_timeout(30);
  auto res = client.Get(path);
  if (!res)
    throw RetryableError("fetching " + url + " failed: " +
                         httplib::to_string(res.error()));
  if (res->status >= 500 || res->status == 429)
    throw RetryableError("fetching " + url + " returned HTTP " +
                         std::to_string(res->status));
  if (res->status != 200)
    throw Error("fetching " + url + " returned HTTP " +
                std::to_string(res->status));
  return res->body;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool lexicalLess(const SPKey& a, const SPKey& b) {
  if (a.subject.lexical() != b.subject.lexical())
    return a.subject.lexical() < b.subject.lexical();
  return a.predicate.lexical() < b.predicate.lexical();
}

CompletenessStatement spStatement(Term subject, Term predicate) {
  return CompletenessStatement(
      BGP{TriplePattern(subject, predicate, Term::variable("v"))});
}

void requireIri(Term t, const char* role) {
  if (!t.isIri()) throw Error(std::string(role) + " must be an IRI");
}

}  // namespace

std::string statementId(Term subject, Term predicate) {
  return spStatement(subject, predicate).id();
}

StoreState loadGraph(const std::string& source) {
  StoreState s;
  if (source.empty()) return s;
  if (source.rfind("https://", 0) == 0)
    throw Error("https sources are not supported; use http:// or a file");
  Graph g = source.rfind("http://", 0) == 0 ? parseGraph(fetchRemote(source))
                                            : loadGraphFile(source);
  if (g.hasReservedTerms())
    throw FreezeCollision("graph uses the reserved namespace " +
                          std::string(kFrozenPrefix));
  s.graph = std::make_shared<const Graph>(std::move(g));
  return s;
}

StoreState loadGraph(const std::string& source,
                     const std::string& statementsFile) {
  StoreState s = loadGraph(source);
  if (statementsFile.empty()) return s;
  auto parsed = parseStatements(readFile(statementsFile));
  for (const auto& c : parsed.statements) {
    auto sp = classify(c);
    if (!sp)
      throw FragmentViolation("statement '" + c.id() +
                              "' is not an SP-statement; the store accepts "
                              "only Compl({(s, p, ?v)})");
    ProvenanceRecord record{c.provenance().value_or(Provenance{}),
                            c.provenance() && c.provenance()->timestamp
                                ? *c.provenance()->timestamp
                                : Timestamp{}};
    s = addStatement(s, sp->subject, sp->predicate, record);
  }
  s.version = 1;
  return s;
}

std::map<Term, std::string> loadLabels(const std::string& path) {
  std::map<Term, std::string> out;
  std::istringstream in(readFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) continue;
    out[Term::iri(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return out;
}

StoreState withLabels(const StoreState& s, std::map<Term, std::string> labels) {
  StoreState next = s;
  next.labels =
      std::make_shared<const std::map<Term, std::string>>(std::move(labels));
  return next;
}

StoreState addStatement(const StoreState& s, Term subject, Term predicate,
                        const ProvenanceRecord& record) {
  requireIri(subject, "subject");
  requireIri(predicate, "predicate");
  StoreState next = s;
  ++next.version;
  SPKey key{subject, predicate};
  next.provenance[key].push_back(record);
  if (!s.index->contains(subject, predicate)) {
    CompletenessStatement c = spStatement(subject, predicate);
    auto statements = std::make_shared<StatementSet>(*s.statements);
    statements->add(c);
    auto index = std::make_shared<SPIndex>(*s.index);
    index->insert(*classify(c));
    next.statements = std::move(statements);
    next.index = std::move(index);
  }
  return next;
}

StoreState removeStatement(const StoreState& s, Term subject, Term predicate) {
  if (!s.index->contains(subject, predicate))
    throw NotFound("no completeness statement for (" + subject.toString() +
                   ", " + predicate.toString() + ")");
  StoreState next = s;
  ++next.version;
  SPKey key{subject, predicate};
  auto statements = std::make_shared<StatementSet>(*s.statements);
  statements->remove(statementId(subject, predicate));
  auto index = std::make_shared<SPIndex>(*s.index);
  index->erase(key);
  next.statements = std::move(statements);
  next.index = std::move(index);
  next.provenance.erase(key);
  return next;
}

QueryResult queryWithCompleteness(const StoreState& s, const Query& q,
                                  const EntailmentConfig& cfg) {
  QueryResult out;
  out.variables = q.projection;
  out.answers = evalQuery(q, *s.graph);
  CompletenessReasoner reasoner(*s.statements, *s.graph, s.index);
  try {
    out.verdict = reasoner.entails(q.body, cfg);
  } catch (const BudgetExceeded& e) {
    out.undecidedReason = e.what();
  }
  return out;
}

EntityView entityView(const StoreState& s, Term entity) {
  EntityView view;
  view.entity = entity;
  if (!entity.isIri()) return view;
  for (const auto& t : s.graph->match(entity, Term(), Term())) {
    if (view.facts.empty() || view.facts.back().first != t.predicate)
      view.facts.emplace_back(t.predicate, std::vector<Term>{});
    view.facts.back().second.push_back(t.object);
  }
  std::sort(view.facts.begin(), view.facts.end(),
            [](const auto& a, const auto& b) {
              return a.first.lexical() < b.first.lexical();
            });
  for (auto it = s.provenance.lower_bound(SPKey{entity, Term()});
       it != s.provenance.end() && it->first.subject == entity; ++it)
    view.completeness[it->first.predicate] = {true, it->second};
  return view;
}

std::vector<StatementListing> listStatements(const StoreState& s,
                                             std::optional<Term> predicate) {
  std::vector<const std::pair<const SPKey, std::vector<ProvenanceRecord>>*> rows;
  for (const auto& entry : s.provenance)
    if (!predicate || entry.first.predicate == *predicate) rows.push_back(&entry);
  std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    return lexicalLess(a->first, b->first);
  });
  std::vector<StatementListing> out;
  out.reserve(rows.size());
  for (const auto* row : rows)
    out.push_back({statementId(row->first.subject, row->first.predicate),
                   row->first.subject, row->first.predicate, row->second});
  return out;
}

std::vector<SearchHit> search(const StoreState& s, const std::string& needle,
                              std::size_t limit) {
  std::vector<SearchHit> out;
  if (needle.empty()) return out;
  const std::string q = lower(needle);
  std::set<Term> candidates;
  for (const auto& t : *s.graph) candidates.insert(t.subject);
  for (const auto& [iri, _] : *s.labels) candidates.insert(iri);
  for (Term t : candidates) {
    auto label = s.labels->find(t);
    std::string text = label == s.labels->end() ? "" : label->second;
    if (lower(t.lexical()).find(q) != std::string::npos ||
        lower(text).find(q) != std::string::npos)
      out.push_back({t, text});
  }
  std::sort(out.begin(), out.end(), [](const SearchHit& a, const SearchHit& b) {
    return a.iri.lexical() < b.iri.lexical();
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

StatementLog::StatementLog(std::string path) : path_(std::move(path)) {}

void StatementLog::append(const std::string& line) {
  std::FILE* f = std::fopen(path_.c_str(), "a");
  if (!f) throw Error("cannot open statement log " + path_);
  bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() &&
            std::fputc('\n', f) != EOF && std::fflush(f) == 0;
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) throw Error("cannot write statement log " + path_);
}

namespace {

json addRecord(Term subject, Term predicate, const ProvenanceRecord& r) {
  json j = {{"op", "add"},
            {"subject", std::string(subject.lexical())},
            {"predicate", std::string(predicate.lexical())}};
  j.update(detail::recordToJson(r));
  return j;
}

}  // namespace

void StatementLog::appendAdd(Term subject, Term predicate,
                             const ProvenanceRecord& record) {
  append(addRecord(subject, predicate, record).dump());
}

void StatementLog::appendRemove(Term subject, Term predicate,
                                Timestamp recorded) {
  json j = {{"op", "remove"},
            {"subject", std::string(subject.lexical())},
            {"predicate", std::string(predicate.lexical())},
            {"recorded", formatTimestamp(recorded)}};
  append(j.dump());
}

StoreState StatementLog::replayAndCompact(const StoreState& base) {
  StoreState state = base;
  if (std::filesystem::exists(path_)) {
    std::istringstream in(readFile(path_));
    std::string line;
    std::size_t lineNo = 0;
    std::vector<std::string> lines;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
    for (const auto& text : lines) {
      ++lineNo;
      json j = json::parse(text, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        // a torn final write is dropped; anything else is corruption
        if (lineNo == lines.size()) break;
        throw Error(path_ + ":" + std::to_string(lineNo) +
                    ": malformed log record");
      }
      try {
        Term s = Term::iri(j.at("subject").get<std::string>());
        Term p = Term::iri(j.at("predicate").get<std::string>());
        const std::string op = j.at("op").get<std::string>();
        if (op == "add") {
          ProvenanceRecord r{detail::provenanceFromJson(j),
                             parseTimestamp(j.at("recorded").get<std::string>())};
          state = addStatement(state, s, p, r);
        } else if (op == "remove") {
          if (state.index->contains(s, p)) state = removeStatement(state, s, p);
        } else {
          throw Error("unknown op '" + op + "'");
        }
      } catch (const std::exception& e) {
        throw Error(path_ + ":" + std::to_string(lineNo) + ": " + e.what());
      }
    }
  }

  // compaction: live adds only; tombstones are dropped here, except for keys
  // that came from the statements file, which would otherwise reappear
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    std::size_t records = 0;
    auto write = [&](const json& j) {
      out << j.dump() << '\n';
      ++records;
    };
    for (const auto& [key, rs] : base.provenance) {
      auto it = state.provenance.find(key);
      if (it != state.provenance.end() && it->second.size() >= rs.size() &&
          std::equal(rs.begin(), rs.end(), it->second.begin()))
        continue;
      write({{"op", "remove"},
             {"subject", std::string(key.subject.lexical())},
             {"predicate", std::string(key.predicate.lexical())},
             {"recorded", formatTimestamp(Timestamp{})}});
    }
    for (const auto& [key, rs] : state.provenance) {
      std::size_t skip = 0;
      if (auto b = base.provenance.find(key); b != base.provenance.end() &&
          rs.size() >= b->second.size() &&
          std::equal(b->second.begin(), b->second.end(), rs.begin()))
        skip = b->second.size();
      for (std::size_t i = skip; i < rs.size(); ++i)
        write(addRecord(key.subject, key.predicate, rs[i]));
    }
    out.flush();
    if (!out) throw Error("cannot write statement log " + tmp);
    state.version = base.version + records;
  }
  std::filesystem::rename(tmp, path_);
  return state;
}

Store::Store(const StoreOptions& options) {
  StoreState state = loadGraph(options.graphSource, options.statementsFile);
  if (!options.labelsFile.empty())
    state = withLabels(state, loadLabels(options.labelsFile));
  if (!options.statementLog.empty()) {
    log_ = std::make_unique<StatementLog>(options.statementLog);
    state = log_->replayAndCompact(state);
  }
  current_ = std::make_shared<const StoreState>(std::move(state));
}

std::shared_ptr<const StoreState> Store::snapshot() const {
  std::lock_guard lock(snapshotMutex_);
  return current_;
}

void Store::publish(StoreState next) {
  auto ptr = std::make_shared<const StoreState>(std::move(next));
  std::lock_guard lock(snapshotMutex_);
  current_ = std::move(ptr);
}

std::string Store::addStatement(Term subject, Term predicate, Provenance prov) {
  std::lock_guard lock(writerMutex_);
  ProvenanceRecord record{std::move(prov), now()};
  StoreState next = store::addStatement(*snapshot(), subject, predicate, record);
  if (log_) log_->appendAdd(subject, predicate, record);
  publish(std::move(next));
  return statementId(subject, predicate);
}

void Store::removeStatement(Term subject, Term predicate) {
  std::lock_guard lock(writerMutex_);
  StoreState next = store::removeStatement(*snapshot(), subject, predicate);
  if (log_) log_->appendRemove(subject, predicate, now());
  publish(std::move(next));
}

}  // namespace rdfcomp::store
