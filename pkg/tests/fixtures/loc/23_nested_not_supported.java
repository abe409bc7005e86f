/* outer /* inner */
int counted;
*/
