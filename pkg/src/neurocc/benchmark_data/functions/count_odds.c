int count_odds(int *arr, int n) {
  int c = 0;
  for (int i = 0; i < n; ++i) {
    if (arr[i] % 2 != 0) {
      c++;
    }
  }
  return c;
}
