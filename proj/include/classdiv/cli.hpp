#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace classdiv::cli {

/*
 * Runs one command line (without the program name). Exit codes: 0 all checks
 * pass, 1 some check failed, 2 invalid input, 3 a resource limit was reached.
 */
int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err);

} // namespace classdiv::cli
