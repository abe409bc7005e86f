/* a // inside block
int notCode;
*/ int code;
/*// */
