/**
 * Utility class.
 *
 * @author someone
 */
public final class Util {

    /** Private constructor. */
    private Util() {
    }

    /**
     * Adds.
     */
    public static int add(int a, int b) {
        return a + b; // sum
    }
}
