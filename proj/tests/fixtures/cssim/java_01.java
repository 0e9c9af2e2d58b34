import java.util.*;

public class Main {
    public static void main(String[] args) {
        List<Integer> values = new ArrayList<>(Arrays.asList(5, 3, 9, 1));
        Collections.sort(values);
        for (int v : values) {
            System.out.println(v);
        }
    }
}
