void vfill(int *a, int v, int n) {
  for (int i = 0; i < n; ++i) {
    a[i] = v;
  }
}
