int a = 1; // one
int b = 2; /* two */
/* lead */ int c = 3;
int d /* mid */ = 4;
// int e = 5;
