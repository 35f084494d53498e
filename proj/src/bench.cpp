#include "rdfcomp/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rdfcomp/engine.h"
#include "rdfcomp/eval.h"
#include "rdfcomp/parse.h"

namespace rdfcomp::bench {

void WorkloadSpec::validate() const {
  if (!(dropFraction >= 0.0 && dropFraction <= 1.0))
    throw Error("drop_fraction must lie in [0, 1]");
  if (repetitions == 0) throw Error("repetitions must be at least 1");
  for (const auto& p : patterns) {
    if (p.predicates.empty())
      throw Error("pattern '" + p.name + "' has no predicates");
    if (p.fanout.size() != p.predicates.size())
      throw Error("pattern '" + p.name + "' needs one fanout per predicate");
    for (auto f : p.fanout)
      if (f == 0) throw Error("pattern '" + p.name + "' has a zero fanout");
  }
  if (patterns.empty() || roots == 0 || queries == 0)
    throw Error("workload would generate no queries");
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::size_t toSize(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw Error("'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

}  // namespace

WorkloadSpec parseSpec(std::string_view text) {
  WorkloadSpec spec;
  std::vector<std::string> order;
  std::map<std::string, PatternSpec> patterns;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineNo, 1, "expected key=value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key.rfind("pattern.", 0) == 0) {
        auto dot = key.rfind('.');
        std::string name = key.substr(8, dot - 8);
        std::string field = key.substr(dot + 1);
        if (name.empty() || dot < 8) throw Error("bad pattern key '" + key + "'");
        if (!patterns.count(name)) order.push_back(name);
        PatternSpec& p = patterns[name];
        p.name = name;
        if (field == "predicates") {
          p.predicates.clear();
          for (auto& w : words(value)) {
            if (w.size() >= 2 && w.front() == '<' && w.back() == '>')
              w = w.substr(1, w.size() - 2);
            p.predicates.push_back(Term::iri(w));
          }
        } else if (field == "fanout") {
          p.fanout.clear();
          for (const auto& w : words(value)) p.fanout.push_back(toSize(w, key));
        } else {
          throw Error("unknown pattern field '" + field + "'");
        }
      } else if (key == "name") {
        spec.name = value;
      } else if (key == "roots") {
        spec.roots = toSize(value, key);
      } else if (key == "queries") {
        spec.queries = toSize(value, key);
      } else if (key == "drop_fraction") {
        std::size_t used = 0;
        spec.dropFraction = std::stod(value, &used);
        if (used != value.size()) throw Error("bad drop_fraction");
      } else if (key == "noise") {
        spec.noise = toSize(value, key);
      } else if (key == "seed") {
        spec.seed = toSize(value, key);
      } else if (key == "repetitions") {
        spec.repetitions = toSize(value, key);
      } else if (key == "warmup") {
        spec.warmup = toSize(value, key);
      } else {
        throw Error("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(lineNo, 1, e.what());
    }
  }
  for (const auto& name : order) spec.patterns.push_back(patterns[name]);
  spec.validate();
  return spec;
}

WorkloadSpec loadSpec(const std::string& path) { return parseSpec(readFile(path)); }

WorkloadSpec defaultSpec() {
  const std::string ns = "http://bench.example/";
  auto p = [&](const char* local) { return Term::iri(ns + local); };
  WorkloadSpec spec;
  spec.name = "chains";
  spec.noise = 2000;
  spec.patterns = {
      {"P1", {p("P25"), p("P25"), p("P25")}, {1, 1, 1}},
      {"P2", {p("P1029"), p("P450"), p("P137")}, {4, 1, 1}},
      {"P3", {p("P150"), p("P150"), p("P2046")}, {108, 1, 1}},
  };
  return spec;
}

Workload generateWorkload(const WorkloadSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  Workload w;
  std::vector<Triple> triples;
  std::vector<SPKey> keys;
  std::size_t counter = 0;
  auto node = [&](const std::string& pattern) {
    return Term::iri("urn:bench:" + spec.name + "/" + pattern + "/n" +
                     std::to_string(counter++));
  };

  for (const auto& ps : spec.patterns) {
    PatternQueries pq;
    pq.name = ps.name;
    for (std::size_t r = 0; r < spec.roots; ++r) {
      Term root = node(ps.name);
      std::vector<Term> level{root};
      // left to right: each instantiated subject at hop h gets Compl((s,p_h,?))
      for (std::size_t h = 0; h < ps.predicates.size(); ++h) {
        std::vector<Term> next;
        for (Term s : level) {
          keys.push_back({s, ps.predicates[h]});
          for (std::size_t k = 0; k < ps.fanout[h]; ++k) {
            Term o = node(ps.name);
            triples.emplace_back(s, ps.predicates[h], o);
            next.push_back(o);
          }
        }
        level = std::move(next);
      }
      std::vector<TriplePattern> body;
      std::vector<Term> vars;
      for (std::size_t h = 0; h <= ps.predicates.size(); ++h)
        vars.push_back(Term::variable("v" + std::to_string(h)));
      for (std::size_t h = 0; h < ps.predicates.size(); ++h)
        body.emplace_back(h == 0 ? root : vars[h], ps.predicates[h], vars[h + 1]);
      BGP b(std::move(body));
      pq.queries.emplace_back(b.variables(), b);
    }
    w.patterns.push_back(std::move(pq));
  }

  if (spec.noise > 0 && !triples.empty()) {
    const Term noisePredicate = Term::iri("urn:bench:noise");
    const std::size_t n = triples.size();
    for (std::size_t i = 0; i < spec.noise; ++i)
      triples.emplace_back(triples[rng() % n].object, noisePredicate,
                           triples[rng() % n].subject);
  }
  w.graph = Graph(std::move(triples));

  auto statement = [](const SPKey& k) {
    return CompletenessStatement(
        BGP{TriplePattern(k.subject, k.predicate, Term::variable("v"))});
  };
  for (const auto& k : keys) w.success.add(statement(k));

  // failure set: drop a random dropFraction, pad with inert dummies
  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng() % i]);
  const auto dropped = static_cast<std::size_t>(
      std::llround(spec.dropFraction * static_cast<double>(keys.size())));
  std::vector<bool> keep(keys.size(), true);
  for (std::size_t i = 0; i < dropped; ++i) keep[order[i]] = false;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keep[i]) w.failure.add(statement(keys[i]));
  for (std::size_t i = 0; i < dropped; ++i) {
    const auto& ps = spec.patterns[rng() % spec.patterns.size()];
    Term p = ps.predicates[rng() % ps.predicates.size()];
    w.failure.add(statement(
        {Term::iri(std::string(kDummyPrefix) + std::to_string(i)), p}));
  }
  return w;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

bool BenchReport::trendHolds() const {
  return !patterns.empty() &&
         std::all_of(patterns.begin(), patterns.end(),
                     [](const PatternReport& p) { return p.trendHolds(); });
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double timeUs(F&& f) {
  auto start = Clock::now();
  f();
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

// Runs every query `warmup + repetitions` times; returns per-query raw timings.
template <typename F>
std::vector<std::vector<double>> measure(const std::vector<const Query*>& qs,
                                         const WorkloadSpec& spec,
                                         std::size_t threads, F&& run) {
  std::vector<std::vector<double>> out(qs.size());
  auto worker = [&](std::size_t shard) {
    for (std::size_t i = shard; i < qs.size(); i += threads) {
      for (std::size_t r = 0; r < spec.warmup; ++r) run(*qs[i]);
      for (std::size_t r = 0; r < spec.repetitions; ++r)
        out[i].push_back(timeUs([&] { run(*qs[i]); }));
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  return out;
}

CaseTiming summarize(const std::string& pattern, const std::string& kase,
                     const std::vector<std::vector<double>>& timings,
                     std::vector<RawTiming>& raw) {
  std::vector<double> perQuery;
  for (std::size_t q = 0; q < timings.size(); ++q) {
    for (std::size_t r = 0; r < timings[q].size(); ++r)
      raw.push_back({pattern, kase, q, r, timings[q][r]});
    perQuery.push_back(median(timings[q]));
  }
  return {median(perQuery), timings.size()};
}

}  // namespace

BenchReport runBench(const WorkloadSpec& spec, const BenchOptions& opts) {
  Workload w = generateWorkload(spec);
  BenchReport report;
  report.repetitions = spec.repetitions;
  report.comparable = opts.threads <= 1;

  EntailmentConfig cfg;
  cfg.indexMode = IndexMode::SPIndexed;
  CompletenessReasoner success(w.success, w.graph);
  CompletenessReasoner failure(w.failure, w.graph);
  success.spIndex();  // build indexes outside the timed region
  failure.spIndex();

  for (const auto& pq : w.patterns) {
    std::vector<const Query*> successQs;
    std::vector<const Query*> failureQs;
    for (const auto& q : pq.queries) {
      if (successQs.size() < spec.queries) successQs.push_back(&q);
      if (failureQs.size() < spec.queries && !failure.entails(q.body, cfg).complete)
        failureQs.push_back(&q);
    }

    PatternReport pr;
    pr.name = pq.name;
    auto check = [&](const CompletenessReasoner& r) {
      return [&r, &cfg](const Query& q) {
        volatile bool sink = r.entails(q.body, cfg).complete;
        (void)sink;
      };
    };
    pr.success = summarize(pq.name, "success",
                           measure(successQs, spec, opts.threads, check(success)),
                           report.raw);
    pr.failure = summarize(pq.name, "failure",
                           measure(failureQs, spec, opts.threads, check(failure)),
                           report.raw);
    pr.eval = summarize(pq.name, "eval",
                        measure(successQs, spec, opts.threads,
                                [&](const Query& q) {
                                  volatile std::size_t sink =
                                      evalQuery(q, w.graph).size();
                                  (void)sink;
                                }),
                        report.raw);
    report.patterns.push_back(pr);
  }
  return report;
}

void writeCsv(const BenchReport& r, std::ostream& out) {
  out << "pattern,case,median_us,samples\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& p : r.patterns) {
    out << p.name << ",success," << p.success.medianUs << "," << p.success.samples << "\n";
    out << p.name << ",failure," << p.failure.medianUs << "," << p.failure.samples << "\n";
    out << p.name << ",eval," << p.eval.medianUs << "," << p.eval.samples << "\n";
  }
}

void writeRawJsonl(const BenchReport& r, std::ostream& out) {
  for (const auto& t : r.raw)
    out << nlohmann::json{{"pattern", t.pattern},
                          {"case", t.kase},
                          {"query", t.query},
                          {"rep", t.repetition},
                          {"us", t.us}}
               .dump()
        << "\n";
}

void writeTable(const BenchReport& r, std::ostream& out) {
  out << std::left << std::setw(10) << "pattern" << std::right
      << std::setw(14) << "success_us" << std::setw(14) << "failure_us"
      << std::setw(14) << "eval_us" << std::setw(10) << "queries"
      << "  trend\n";
  out << std::fixed << std::setprecision(1);
  for (const auto& p : r.patterns)
    out << std::left << std::setw(10) << p.name << std::right
        << std::setw(14) << p.success.medianUs << std::setw(14)
        << p.failure.medianUs << std::setw(14) << p.eval.medianUs
        << std::setw(10) << p.success.samples << "  "
        << (p.trendHolds() ? "ok" : "VIOLATED") << "\n";
  out << "medians over " << r.repetitions << " repetitions per query"
      << (r.comparable ? "" : " (parallel run: timings not comparable)")
      << "\n";
}

}  // namespace rdfcomp::bench
