#pragma once

namespace optomech {

// Entry point of the command-line tool. Returns 0 on success, 1 when a
// check or computation fails, 2 on usage or configuration errors.
int run(int argc, char** argv);

}  // namespace optomech
