int prod_elts(int *elts, int n) {
  int p = 1;
  for (int i = 0; i < n; ++i) {
    p *= elts[i];
  }
  return p;
}
