#include <cstdio>

int main() {
  std::puts("forge: subcommands are wired up in a later build step");
  return 0;
}
