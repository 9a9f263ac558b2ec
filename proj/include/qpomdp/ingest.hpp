#pragma once

#include <string>
#include <vector>

#include "qpomdp/model.hpp"

namespace qpomdp {

// Shared lexer for the three text formats. Lines are split on whitespace,
// '#' starts a comment, blank lines vanish. A leading "key:" token is kept
// as-is; the parsers dispatch on it.
struct TokenLine {
    std::vector<std::string> toks;
    int lineno; // 1-based, for errors
};
std::vector<TokenLine> tokenize_file(const std::string& text);

// True for [A-Za-z0-9_]+.
bool is_identifier(const std::string& s);

// Model format ("QPOMDP v1"). parse_model accepts the extended observation
// forms (sets, per-state distributions); load_model additionally normalizes
// to deterministic observations and validates. write_model emits the
// canonical byte form and only accepts deterministic models, so
// parse(write(m)) == m and write(parse(write(m))) is byte-identical.
GeneralPomdp parse_model(const std::string& text);
Pomdp load_model(const std::string& text);
std::string write_model(const Pomdp& m);

// Convenience file wrappers; throw InputError when the file is unreadable.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace qpomdp
