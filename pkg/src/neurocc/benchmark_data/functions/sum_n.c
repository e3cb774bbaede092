int sum_n(int n) {
  int r = 0;
  for (; n > 0; n--)
    r += n;
  return r;
}
