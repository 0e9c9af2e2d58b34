public class Main {
    static String classify(int v) {
        switch (Integer.signum(v)) {
            case -1:
                return "negative";
            case 0:
                return "zero";
            default:
                return "positive";
        }
    }

    public static void main(String[] args) {
        int[] values = {-2, 0, 7};
        for (int v : values) System.out.println(classify(v));
    }
}
