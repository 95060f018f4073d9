#include "optomech/cli.hpp"

int main(int argc, char** argv) { return optomech::run(argc, argv); }
