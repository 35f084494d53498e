#include "rdfcomp/term.h"

#include <deque>
#include <mutex>
#include <unordered_map>

#include "rdfcomp/error.h"

namespace rdfcomp {
namespace {

class AtomPool {
 public:
  const detail::Atom* intern(TermKind kind, std::string_view text,
                             std::string_view datatype,
                             std::string_view language) {
    std::string key;
    key.reserve(text.size() + datatype.size() + language.size() + 3);
    key.push_back(static_cast<char>('0' + static_cast<int>(kind)));
    key.append(text);
    if (kind == TermKind::Literal) {
      key.push_back('\x1f');
      key.append(datatype);
      key.push_back('\x1f');
      key.append(language);
    }

    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;

    // id 0 is the null term
    auto id = static_cast<std::uint32_t>(atoms_.size() + 1);
    bool reserved = kind == TermKind::Iri && text.starts_with(kFrozenPrefix);
    atoms_.push_back(detail::Atom{kind, id, std::string(text),
                                  std::string(datatype), std::string(language),
                                  reserved});
    const detail::Atom* atom = &atoms_.back();
    index_.emplace(std::move(key), atom);
    return atom;
  }

 private:
  std::mutex mutex_;
  std::deque<detail::Atom> atoms_;  // stable addresses
  std::unordered_map<std::string, const detail::Atom*> index_;
};

AtomPool& pool() {
  static AtomPool instance;
  return instance;
}

}  // namespace

Term Term::iri(std::string_view iri) {
  if (iri.empty()) throw Error("empty IRI");
  return Term(pool().intern(TermKind::Iri, iri, {}, {}));
}

Term Term::literal(std::string_view lexical, std::string_view datatype,
                   std::string_view language) {
  if (!datatype.empty() && !language.empty())
    throw Error("literal cannot carry both a datatype and a language tag");
  return Term(pool().intern(TermKind::Literal, lexical, datatype, language));
}

bool Term::isValidVariableName(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(name.front())) return false;
  for (char c : name)
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  return true;
}

Term Term::variable(std::string_view name) {
  if (!isValidVariableName(name))
    throw Error("invalid variable name '" + std::string(name) + "'");
  return Term(pool().intern(TermKind::Variable, name, {}, {}));
}

std::string escapeLiteral(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string Term::toString() const {
  if (!atom_) return "<null>";
  switch (atom_->kind) {
    case TermKind::Iri:
      return "<" + atom_->text + ">";
    case TermKind::Variable:
      return "?" + atom_->text;
    case TermKind::Literal: {
      std::string out = "\"" + escapeLiteral(atom_->text) + "\"";
      if (!atom_->datatype.empty()) out += "^^<" + atom_->datatype + ">";
      if (!atom_->language.empty()) out += "@" + atom_->language;
      return out;
    }
  }
  return {};
}

}  // namespace rdfcomp
