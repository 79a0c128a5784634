// Text interchange format ("jdpew-conic/1") for built conic programs, meant
// for consumption by external solver frontends.
//
// Layout (space-separated tokens, one record per line, numbers printed with
// up to 17 significant digits):
//   jdpew-conic/1
//   kind <full|step1|step2|bm1|bm2|bm3>
//   dims m <m> n <n> l <l> w <w>
//   profit_shift <value>        # equivalent profit = shift - objective
//   obj_constant <value>
//   fixed_levels <n ints>       # present only when the program fixes them
//   fixed_x <n*m bits>          # present only for the pricing step
//   fixed_y <n bits>
//   vars <count>
//   v <index> <name> <B|C> <lb> <ub> <role text>
//   rows <count>
//   r <index> <name> <le|ge|eq> <rhs> <nterms> (<var> <coef>)...
//   cones <count>
//   k <index> <name> <w var> <t var>
//   obj <nterms>
//   c <var> <coef>
//   end
// write(read(text)) == text for files produced by this writer.
#pragma once

#include <string>

#include "jdpew/reform.hpp"

namespace jdpew {

std::string write_conic_text(const ConicProgram& prog);
ConicProgram read_conic_text(const std::string& text);

void export_conic(const ConicProgram& prog, const std::string& path);
ConicProgram read_conic_file(const std::string& path);

}  // namespace jdpew
