#pragma once

#include <json.hpp>

#include "rdfcomp/engine.h"
#include "rdfcomp/store.h"
#include "rdfcomp/term.h"

namespace rdfcomp::detail {

using nlohmann::json;

json termToJson(Term t);
json mappingToJson(const Mapping& m);
json provenanceToJson(const Provenance& p);
Provenance provenanceFromJson(const json& j);
json recordToJson(const store::ProvenanceRecord& r);

}  // namespace rdfcomp::detail
