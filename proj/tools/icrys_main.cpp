#include <cstdio>
int main() { std::puts("icrys: placeholder"); return 2; }
