#include "json_codec.h"

namespace rdfcomp::detail {

json termToJson(Term t) {
  if (t.isIri()) return {{"type", "iri"}, {"value", std::string(t.lexical())}};
  json j = {{"type", "literal"}, {"value", std::string(t.lexical())}};
  if (!t.datatype().empty()) j["datatype"] = std::string(t.datatype());
  if (!t.language().empty()) j["lang"] = std::string(t.language());
  return j;
}

json mappingToJson(const Mapping& m) {
  json j = json::object();
  for (const auto& [var, value] : m.bindings())
    j[std::string(var.lexical())] = termToJson(value);
  return j;
}

json provenanceToJson(const Provenance& p) {
  json j = json::object();
  if (p.author) j["author"] = *p.author;
  if (p.reference) j["reference"] = *p.reference;
  if (p.timestamp) j["time"] = formatTimestamp(*p.timestamp);
  return j;
}

Provenance provenanceFromJson(const json& j) {
  Provenance p;
  auto text = [&](const char* key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
  };
  p.author = text("author");
  p.reference = text("reference");
  if (auto t = text("time")) p.timestamp = parseTimestamp(*t);
  return p;
}

json recordToJson(const store::ProvenanceRecord& r) {
  json j = provenanceToJson(r.provenance);
  j["recorded"] = formatTimestamp(r.recorded);
  return j;
}

}  // namespace rdfcomp::detail
