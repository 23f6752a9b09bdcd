#pragma once

// JSON game and profile files.
//
// Game file, manipulative form:
//   {"name": "srg", "players": 2, "object_dim": 2,
//    "initial_state": M,
//    "strategy_basis": [["I","X","Y","Z"], [{"label": "A", "matrix": M}, ...]],
//    "order": [1, 2],            // 1-based; the first entry acts first
//    "payoffs": [P1, P2],        // observables on the object
//    "classical": false}         // optional; true keeps only diagonal payoffs
// Game file, abstract form:
//   {"name": "pd", "abstract": {"dims": [2, 2], "labels": [["C","D"], ["C","D"]],
//                              "payoffs": [H1, H2]}}
//   with "tables" (one nested array of shape dims per player) in place of
//   "payoffs" for classical games.
// Profile file:
//   {"product": [M1, M2], "restricted": false}  or  {"joint": M}
//   where a factor may also be {"diagonal": [p1, p2, ...]}.
// A matrix M is a list of rows; an entry is a number or an [re, im] pair.

#include <string>
#include <string_view>

#include <json.hpp>

#include "hamgame/error.hpp"
#include "hamgame/game.hpp"

namespace hamgame::io {

using Json = nlohmann::ordered_json;

// Malformed document or a value of the wrong shape; the message carries
// "source:line:".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

AnyGame parse_game(std::string_view text, std::string_view source = "<input>");
// A path, or "builtin:NAME".
AnyGame load_game(const std::string& spec);

StrategyProfile parse_profile(std::string_view text, std::string_view source = "<input>");
StrategyProfile load_profile(const std::string& path);

Json matrix_to_json(const CMatrix& m);
Json game_to_json(const AbstractGame& game);
Json profile_to_json(const StrategyProfile& profile);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace hamgame::io
