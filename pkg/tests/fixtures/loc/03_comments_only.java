// first

/* block */

/** javadoc
 * more
 */
