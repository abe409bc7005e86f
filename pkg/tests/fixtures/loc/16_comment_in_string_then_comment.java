String a = "/*"; // trailing
String b = "*/"; /* block
still comment "with quote
*/
int c;
