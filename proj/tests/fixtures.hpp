#pragma once

#include <string>

#include <autseq/autseq.hpp>

inline autseq::Dfao bundled(const std::string& name)
{
  return autseq::load_automaton(std::string(AUTOMATA_DIR) + "/" + name + ".json");
}

inline autseq::Perm cyc(std::size_t n, const std::string& s) { return autseq::parse_cycles(n, s); }
