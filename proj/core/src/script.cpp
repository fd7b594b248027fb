#include "dynlis/script.hpp"

#include <sstream>

namespace dynlis {

UpdateScript parse_script(std::istream& in) {
    UpdateScript script;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank line
        if (tok == "#") continue;
        auto need_int = [&](const char* what) {
            int64_t v;
            if (!(ls >> v)) throw ScriptParseError(lineno, std::string("expected ") + what);
            return v;
        };
        auto end_of_line = [&]() {
            std::string rest;
            if (ls >> rest) throw ScriptParseError(lineno, "trailing token '" + rest + "'");
        };
        if (tok == "P") {
            if (!first) throw ScriptParseError(lineno, "preload must be the first line");
            int64_t v;
            while (ls >> v) script.preload.push_back(v);
            if (!ls.eof()) throw ScriptParseError(lineno, "bad preload value");
        } else if (tok == "I") {
            int64_t pos = need_int("position");
            int64_t value = need_int("value");
            end_of_line();
            script.ops.push_back({ScriptOp::Kind::Insert, pos, value});
        } else if (tok == "D") {
            int64_t pos = need_int("position");
            end_of_line();
            script.ops.push_back({ScriptOp::Kind::Delete, pos, 0});
        } else if (tok == "Q" || tok == "QC") {
            int64_t i = need_int("interval start");
            int64_t j = need_int("interval end");
            end_of_line();
            script.ops.push_back(
                {tok == "Q" ? ScriptOp::Kind::Query : ScriptOp::Kind::QueryChain, i, j});
        } else {
            throw ScriptParseError(lineno, "unknown command '" + tok + "'");
        }
        first = false;
    }
    return script;
}

std::string format_script(const UpdateScript& script) {
    std::ostringstream out;
    if (!script.preload.empty()) {
        out << "P";
        for (int64_t v : script.preload) out << ' ' << v;
        out << '\n';
    }
    for (const auto& op : script.ops) {
        switch (op.kind) {
            case ScriptOp::Kind::Insert: out << "I " << op.a << ' ' << op.b << '\n'; break;
            case ScriptOp::Kind::Delete: out << "D " << op.a << '\n'; break;
            case ScriptOp::Kind::Query: out << "Q " << op.a << ' ' << op.b << '\n'; break;
            case ScriptOp::Kind::QueryChain: out << "QC " << op.a << ' ' << op.b << '\n'; break;
        }
    }
    return out.str();
}

}  // namespace dynlis
