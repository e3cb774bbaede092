int int_sqrt(int n) {
  int r = 0;
  int s = 1;
  while (s <= n) {
    r++;
    s = (r + 1) * (r + 1);
  }
  return r;
}
