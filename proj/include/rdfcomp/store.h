#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rdfcomp/engine.h"
#include "rdfcomp/graph.h"
#include "rdfcomp/sp_index.h"
#include "rdfcomp/statement.h"

namespace rdfcomp::store {

// One add, as recorded in the log. Several records may share a key.
struct ProvenanceRecord {
  Provenance provenance;
  Timestamp recorded;  // server time of the add
  friend bool operator==(const ProvenanceRecord&,
                         const ProvenanceRecord&) = default;
};

// Immutable snapshot. Mutations build a new state sharing unchanged parts.
struct StoreState {
  std::shared_ptr<const Graph> graph = std::make_shared<const Graph>();
  // One SP-statement per key, id = content hash of its body.
  std::shared_ptr<const StatementSet> statements =
      std::make_shared<const StatementSet>();
  std::shared_ptr<const SPIndex> index = std::make_shared<const SPIndex>();
  std::map<SPKey, std::vector<ProvenanceRecord>> provenance;
  std::shared_ptr<const std::map<Term, std::string>> labels =
      std::make_shared<const std::map<Term, std::string>>();
  std::uint64_t version = 1;
};

// file path, or an http:// URL serving the graph file format
StoreState loadGraph(const std::string& source);
// Co-loads a statement file; every statement must be an SP-statement.
StoreState loadGraph(const std::string& source,
                     const std::string& statementsFile);
std::map<Term, std::string> loadLabels(const std::string& path);

StoreState withLabels(const StoreState& s, std::map<Term, std::string> labels);
// Idempotent per key: a second add only appends a provenance record.
StoreState addStatement(const StoreState& s, Term subject, Term predicate,
                        const ProvenanceRecord& record);
// Throws NotFound if no statement has this key.
StoreState removeStatement(const StoreState& s, Term subject, Term predicate);

std::string statementId(Term subject, Term predicate);

struct QueryResult {
  std::vector<Term> variables;
  std::vector<Mapping> answers;  // projected, with multiplicity
  std::optional<EntailmentVerdict> verdict;  // empty when undecided
  std::string undecidedReason;
  bool undecided() const { return !verdict.has_value(); }
};

QueryResult queryWithCompleteness(const StoreState& s, const Query& q,
                                  const EntailmentConfig& cfg = {});

struct PredicateCompleteness {
  bool complete = false;
  std::vector<ProvenanceRecord> records;
};

struct EntityView {
  Term entity;
  std::vector<std::pair<Term, std::vector<Term>>> facts;  // by predicate
  std::map<Term, PredicateCompleteness> completeness;      // complete keys only
};

EntityView entityView(const StoreState& s, Term entity);

struct StatementListing {
  std::string id;
  Term subject;
  Term predicate;
  std::vector<ProvenanceRecord> records;
};

// Sorted by subject, then predicate (lexical order).
std::vector<StatementListing> listStatements(
    const StoreState& s, std::optional<Term> predicate = std::nullopt);

struct SearchHit {
  Term iri;
  std::string label;
};

// Case-insensitive substring match over subject IRIs and labels.
std::vector<SearchHit> search(const StoreState& s, const std::string& needle,
                              std::size_t limit = 20);

// Append-only JSON-lines statement log.
class StatementLog {
 public:
  explicit StatementLog(std::string path);

  const std::string& path() const noexcept { return path_; }
  // Replays the log onto `base`, then rewrites it keeping only live adds.
  StoreState replayAndCompact(const StoreState& base);
  void appendAdd(Term subject, Term predicate, const ProvenanceRecord& record);
  void appendRemove(Term subject, Term predicate, Timestamp recorded);

 private:
  void append(const std::string& line);
  std::string path_;
};

struct StoreOptions {
  std::string graphSource;      // file or http:// URL; empty: empty graph
  std::string statementsFile;   // optional initial SP-statements
  std::string statementLog;     // optional; no persistence when empty
  std::string labelsFile;       // optional TSV: iri <TAB> label
};

// Single writer, many readers. Readers take a snapshot and never block on
// writers; the log is written under the writer lock before publishing.
class Store {
 public:
  explicit Store(const StoreOptions& options);

  std::shared_ptr<const StoreState> snapshot() const;

  // Returns the statement id. Throws if persisting fails; state unchanged.
  std::string addStatement(Term subject, Term predicate, Provenance prov = {});
  void removeStatement(Term subject, Term predicate);

 private:
  void publish(StoreState next);

  mutable std::mutex snapshotMutex_;
  std::shared_ptr<const StoreState> current_;
  std::mutex writerMutex_;
  std::unique_ptr<StatementLog> log_;
};

}  // namespace rdfcomp::store
