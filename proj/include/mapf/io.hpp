#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mapf/model.hpp"
#include "mapf/solver_order.hpp"

namespace mapf {

// `line` is 1-based; 0 for errors not tied to a line (validation).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Vertices and agents are numbered in lexicographic name order, edges in
// file order. `% key=value` comment lines are collected into meta.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

// `plan length N` header followed by move(a,u,v,t) with t = departure + 1.
std::string emit_plan(const Problem& p, const Plan& plan);
// Untimed moves, resolves and the arrival witness (when present), followed
// by the timed plan.
std::string emit_solution(const Problem& p, const OrderSolution& sol);

// Reads the timed moves of a plan file; untimed moves, resolves and witness
// lines are skipped.
Plan parse_plan(std::string_view text, const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mapf
