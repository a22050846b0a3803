#ifndef STOCHDISS_CLI_HPP
#define STOCHDISS_CLI_HPP

namespace stochdiss {

/// Exit codes: 0 success, 1 usage or I/O error, 2 invalid configuration,
/// 3 numerical blowup.
int run_cli(int argc, char** argv);

}  // namespace stochdiss

#endif  // STOCHDISS_CLI_HPP
