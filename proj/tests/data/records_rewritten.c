struct S {
  unsigned int p;
  unsigned int q;
} x_a;
int i_a;
int i, k;

main()
{
  i_a = nd(0, 99999);

  // first loop body
  k = nd();
  i = i_a;
  k = i;
  (i == i_a) ? x_a.p = k : k;
  (i == i_a) ? x_a.q = k * k : k * k;
  k = nd();

  // second loop body
  i = i_a;
  assert(((i == i_a) ? x_a.q : nd())
         == ((i == i_a) ? x_a.p : nd())
          * ((i == i_a) ? x_a.p : nd()));
}
