String s = "abc // not a comment
// comment
int x;
