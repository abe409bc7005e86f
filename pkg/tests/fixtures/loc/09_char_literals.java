char q = '"';
char s = '/';
// comment
char e = '\'';
String x = "ok"; /* c */
