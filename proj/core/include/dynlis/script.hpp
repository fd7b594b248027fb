#pragma once

// Replayable update scripts: an optional preload line `P v1 v2 ...`
// followed by commands `I <pos> <value>`, `D <pos>`, `Q <i> <j>`,
// `QC <i> <j>`, one per line. Parsing is strict and reports line numbers.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynlis {

struct ScriptOp {
    enum class Kind : uint8_t { Insert, Delete, Query, QueryChain };
    Kind kind;
    int64_t a = 0;  // position (I/D) or interval start (Q/QC)
    int64_t b = 0;  // value (I) or interval end (Q/QC)
};

struct UpdateScript {
    std::vector<int64_t> preload;
    std::vector<ScriptOp> ops;

    bool has_inserts() const {
        for (const auto& op : ops)
            if (op.kind == ScriptOp::Kind::Insert) return true;
        return false;
    }
};

class ScriptParseError : public std::runtime_error {
  public:
    ScriptParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

UpdateScript parse_script(std::istream& in);
std::string format_script(const UpdateScript& script);

}  // namespace dynlis
