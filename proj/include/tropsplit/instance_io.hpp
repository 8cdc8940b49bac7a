#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "tropsplit/splitting.hpp"

namespace tropsplit {

using Json = nlohmann::json;

/// Parse/validation failure with a JSON-pointer-style location.
/// kind is "schema" (shape), "reference" (dangling id), or "math"
/// (violated invariant).
struct ParseError : std::runtime_error {
  ParseError(std::string k, std::string w, const std::string& msg)
      : std::runtime_error(msg), kind(std::move(k)), where(std::move(w)) {}
  std::string kind;
  std::string where;
};

Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j, const std::string& where);
Json zvec_to_json(const ZVec& v);
ZVec zvec_from_json(const Json& j, const std::string& where);
Json qvec_to_json(const QVec& v);
Json cone_to_json(const Cone& c);
Json fan_to_json(const Fan& f);
Json type_to_json(const DecoratedType& t);
DecoratedType type_from_json(const Json& j, const std::string& where);

/// A fully resolved instance document: registries of fans, fan morphisms,
/// one cone complex, decorated types, and (optionally) the splitting
/// instance block.
struct InstanceDocument {
  Json raw;
  std::map<std::string, FanPtr> fans;
  struct MorphismRef {
    std::string source, target;
    IntMatrix matrix;
  };
  std::map<std::string, MorphismRef> morphisms;
  ConeComplex complex;
  std::map<std::string, DecoratedType> types;
  bool has_instance = false;
  SplittingInstance instance;
};

InstanceDocument parse_and_validate(const std::string& bytes);

struct CommandFlags {
  bool pretty = false;
  std::size_t threads = 1;
  long bound = 3;
  Json kunneth;  // null or the parsed kunneth payload
};

struct CommandResult {
  Json output;
  int exit_code = 0;
};

/// Dispatches one CLI command; exit code 0 on success, 2 on a negative
/// mathematical verdict, never returns on malformed input (throws).
CommandResult run_command(const InstanceDocument& doc,
                          const std::string& command,
                          const CommandFlags& flags);

/// Canonical serialization: sorted keys, decimal strings, stable layout.
std::string render_output(const Json& j, bool pretty);

}  // namespace tropsplit
