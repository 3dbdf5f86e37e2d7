#pragma once

#include <covcert/covdeg.hpp>
#include <covcert/separation.hpp>
#include <covcert/snc.hpp>

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

/// Serialization owned by the CLI: the line-oriented graph text format, the
/// JSON mirrors of every result type, and the versioned certificate
/// documents.  JSON is the compatibility contract: canonical form has sorted
/// keys, arbitrary-precision integers as decimal strings, rationals as "p/q"
/// strings, and re-serialization is idempotent.
namespace covcert::io {

inline constexpr const char* kSchemaVersion = "covcert/1";
inline constexpr const char* kCacheSchemaVersion = "covcert-cache/1";
inline constexpr const char* kCacheEnvVar = "COVCERT_CACHE";

struct ParseError : std::runtime_error {
  int line = 0;  // 1-based; 0 when not line-oriented
  ParseError(std::string msg, int line_no = 0)
      : std::runtime_error(std::move(msg)), line(line_no) {}
};

// -- numbers ---------------------------------------------------------------

nlohmann::json int_to_json(const Int& v);      // decimal string
Int int_from_json(const nlohmann::json& j);
nlohmann::json rat_to_json(const Rat& v);      // "p/q" string
Rat rat_from_json(const nlohmann::json& j);

// -- graphs ----------------------------------------------------------------

/// Text format, one directive per line ('#' comments):
///   components K
///   order N
///   vertex NAME into=1,2 [kind=ghost|z|x1|x2] [speeds=a,b]
///   edge NAME NAME [delta=D] [orders=m1,m2|m1,m2]
snc::Graph parse_graph_text(std::istream& in);
snc::Graph parse_graph_text(const std::string& text);
std::string write_graph_text(const snc::Graph& g);

nlohmann::json graph_to_json(const snc::Graph& g);
snc::Graph graph_from_json(const nlohmann::json& j);

/// Loads by extension: ".json" -> JSON, anything else -> text.
snc::Graph load_graph_file(const std::string& path);

// -- covdeg certificates ---------------------------------------------------

nlohmann::json certificate_to_json(const covdeg::CertNode& node);
covdeg::CertPtr certificate_from_json(const nlohmann::json& j);

nlohmann::json coprime_array_to_json(const admissible::CoprimeArrayCertificate& c);
admissible::CoprimeArrayCertificate coprime_array_from_json(const nlohmann::json& j);

// -- schedules -------------------------------------------------------------

nlohmann::json schedule_to_json(const separation::Schedule& s);
separation::Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::json threshold_to_json(const separation::ThresholdReport& t);
separation::ThresholdReport threshold_from_json(const nlohmann::json& j);

// -- documents -------------------------------------------------------------

/// Envelope: schema_version, tool_version, kind, command, problem, result,
/// provenance, timing_ms.
nlohmann::json make_document(const std::string& kind, const std::string& command,
                             nlohmann::json problem, nlohmann::json result,
                             nlohmann::json provenance, long long timing_ms);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

/// Re-verifies an emitted document from scratch.  Returns nullopt on
/// success, else the failure reason.  Supported kinds: covdeg (rule
/// re-evaluation), gonality (exact schedule re-checks), balance-check /
/// balance-enumerate (labeling re-checks on the embedded graphs).
std::optional<std::string> verify_document(const nlohmann::json& doc);

/// Per-locus admissibility/matching/breaking summary for a labeled graph;
/// shared by the CLI emitter and verify_document so both sides agree.
nlohmann::json balance_matching_json(const snc::Graph& g);

// -- covdeg result cache ---------------------------------------------------

/// File cache keyed by the canonical problem encoding plus the options that
/// affect results.  Versioned: entries under a different schema version are
/// ignored.  Access takes an advisory exclusive lock.
class Cache {
 public:
  explicit Cache(std::string path);
  std::optional<nlohmann::json> lookup(const std::string& key) const;
  void store(const std::string& key, nlohmann::json value);

  static std::string problem_key(const covdeg::Problem& p, const covdeg::Options& o);

 private:
  std::string path_;
};

}  // namespace covcert::io
