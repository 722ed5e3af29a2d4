#pragma once

#include <string>

namespace formspec {

/// A 1-based line/column location with a length in characters (code points).
struct SrcPos {
    int line = 1;
    int col = 1;
    int len = 0;

    std::string str() const {
        return "(line " + std::to_string(line) + ", column " + std::to_string(col) + ")";
    }
    bool operator==(const SrcPos&) const = default;
};

/// Shift a position found inside a snippet that itself starts at `origin`.
inline SrcPos relocate(SrcPos inner, SrcPos origin) {
    if (inner.line == 1) return {origin.line, origin.col + inner.col - 1, inner.len};
    return {origin.line + inner.line - 1, inner.col, inner.len};
}

}  // namespace formspec
