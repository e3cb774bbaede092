int sum_elts(int *elts, int n) {
  int s = 0;
  for (int i = 0; i < n; ++i) {
    s += elts[i];
  }
  return s;
}
