int a = 8 / 2;
int b = a /2; int c = a/ 2;
int d = a * /* note */ 3;
int e = 4 */* weird but legal */ 2;
